// Query-by-example form model. The grid of predicate rows plus the
// as-of/group/order controls maps 1:1 onto the service's query object;
// invalid forms fail validation and never reach the wire.

import type { Operator, QuerySpecPayload } from "./types.js";

export interface PredicateRow {
    path: string;
    op: Operator;
    literal: string;
}

export interface QueryFormState {
    source: string;
    predicates: PredicateRow[];
    asofValid: string; // "" = today
    asofTransaction: string; // "" = latest knowledge
    groupBy: string; // "" = none
    aggregate: "" | "count" | "count_distinct";
    distinctPath: string;
    orderKey: string; // "" = default order
    orderDirection: "asc" | "desc";
    limit: string; // "" = no limit
}

export const SOURCES = ["messages", "persons", "institutions", "reports"] as const;

export const OPERATORS: Operator[] = ["=", "!=", "<", "<=", ">", ">=", "contains"];

// Queryable paths per source, with the literal type they compare to.
export const FIELDS: Record<string, Record<string, "str" | "date">> = {
    messages: {
        message_id: "str",
        list_id: "str",
        sender: "str",
        "sender.person": "str",
        "sender.domain": "str",
        "sender.institution": "str",
        sender_name: "str",
        subject: "str",
        subject_key: "str",
        sent_at: "date",
        in_reply_to: "str",
        reference: "str",
        recipient: "str",
        body: "str",
    },
    persons: {
        person_id: "str",
        name: "str",
        address: "str",
        function: "str",
        affiliation: "str",
    },
    institutions: {
        institution_id: "str",
        name: "str",
        kind: "str",
        domain: "str",
    },
    reports: {
        report_id: "str",
        title: "str",
        maturity: "str",
        pub_date: "date",
        author: "str",
    },
};

export function emptyForm(source = "messages"): QueryFormState {
    return {
        source,
        predicates: [],
        asofValid: "",
        asofTransaction: "",
        groupBy: "",
        aggregate: "count",
        distinctPath: "",
        orderKey: "",
        orderDirection: "desc",
        limit: "",
    };
}

const DATE_RE = /^\d{4}-\d{2}-\d{2}$/;

export function validateForm(form: QueryFormState): string[] {
    const errors: string[] = [];
    const fields = FIELDS[form.source];
    if (!fields) {
        errors.push(`unknown source "${form.source}"`);
        return errors;
    }
    form.predicates.forEach((pred, i) => {
        const kind = fields[pred.path];
        if (!kind) {
            errors.push(`row ${i + 1}: unknown field "${pred.path}"`);
            return;
        }
        if (pred.literal.trim() === "") {
            errors.push(`row ${i + 1}: missing value`);
        } else if (kind === "date" && pred.op !== "contains" && !DATE_RE.test(pred.literal.trim())) {
            errors.push(`row ${i + 1}: "${pred.path}" needs a YYYY-MM-DD value`);
        }
    });
    for (const [label, value] of [["as-of", form.asofValid], ["tx as-of", form.asofTransaction]]) {
        if (value && !DATE_RE.test(value)) {
            errors.push(`${label}: dates are YYYY-MM-DD`);
        }
    }
    if (form.groupBy && !fields[form.groupBy]) {
        errors.push(`unknown group-by field "${form.groupBy}"`);
    }
    if (form.aggregate === "count_distinct" && !fields[form.distinctPath]) {
        errors.push("count-distinct needs a field");
    }
    if (form.limit && (!/^\d+$/.test(form.limit) || parseInt(form.limit, 10) <= 0)) {
        errors.push("limit must be a positive integer");
    }
    if (form.orderKey && form.orderKey !== "count" && form.aggregate !== "" && form.orderKey !== form.groupBy) {
        errors.push(`cannot order an aggregate by "${form.orderKey}"`);
    }
    return errors;
}

export function toQuerySpec(form: QueryFormState): QuerySpecPayload {
    const fields = FIELDS[form.source];
    return {
        source: form.source,
        predicates: form.predicates.map((p) => ({
            path: p.path,
            op: p.op,
            literal: fields[p.path] === "date" && p.op !== "contains" ? p.literal.trim() : p.literal,
        })),
        asof_valid: form.asofValid || null,
        asof_transaction: form.asofTransaction || null,
        group_by: form.groupBy || null,
        aggregate: form.aggregate || null,
        distinct_path: form.aggregate === "count_distinct" ? form.distinctPath : null,
        order: form.orderKey ? [form.orderKey, form.orderDirection] : null,
        limit: form.limit ? parseInt(form.limit, 10) : null,
    };
}

export function fromQuerySpec(spec: QuerySpecPayload): QueryFormState {
    return {
        source: spec.source,
        predicates: spec.predicates.map((p) => ({
            path: p.path,
            op: p.op,
            literal: String(p.literal),
        })),
        asofValid: spec.asof_valid ?? "",
        asofTransaction: spec.asof_transaction ?? "",
        groupBy: spec.group_by ?? "",
        aggregate: spec.aggregate ?? "",
        distinctPath: spec.distinct_path ?? "",
        orderKey: spec.order ? spec.order[0] : "",
        orderDirection: spec.order ? spec.order[1] : "desc",
        limit: spec.limit === null ? "" : String(spec.limit),
    };
}
