import { describe, expect, it } from "vitest";

import {
    FIELDS,
    QueryFormState,
    emptyForm,
    fromQuerySpec,
    toQuerySpec,
    validateForm,
} from "../src/queryForm.js";
import type { QuerySpecPayload } from "../src/types.js";

function validForm(): QueryFormState {
    return {
        source: "messages",
        predicates: [
            { path: "sender.domain", op: "=", literal: "yahoo.com" },
            { path: "sent_at", op: ">=", literal: "2002-04-01" },
        ],
        asofValid: "2002-06-01",
        asofTransaction: "",
        groupBy: "sender.person",
        aggregate: "count",
        distinctPath: "",
        orderKey: "count",
        orderDirection: "desc",
        limit: "15",
    };
}

describe("validation gates submission", () => {
    it("accepts the default and a fully populated form", () => {
        expect(validateForm(emptyForm())).toEqual([]);
        expect(validateForm(validForm())).toEqual([]);
    });

    it("rejects a predicate without a value", () => {
        const form = validForm();
        form.predicates[0].literal = "  ";
        expect(validateForm(form)).toHaveLength(1);
    });

    it("rejects non-ISO dates on date fields and as-of pickers", () => {
        const form = validForm();
        form.predicates[1].literal = "April 1st";
        expect(validateForm(form).join(" ")).toContain("YYYY-MM-DD");
        const form2 = validForm();
        form2.asofValid = "02-06-01";
        expect(validateForm(form2)).toHaveLength(1);
    });

    it("rejects unknown fields and bad limits", () => {
        const form = validForm();
        form.groupBy = "sender.shoe_size";
        expect(validateForm(form)).toHaveLength(1);
        const form2 = validForm();
        form2.limit = "0";
        expect(validateForm(form2)).toHaveLength(1);
    });

    it("requires a field for count-distinct", () => {
        const form = validForm();
        form.aggregate = "count_distinct";
        form.distinctPath = "";
        expect(validateForm(form)).toHaveLength(1);
        form.distinctPath = "sender.person";
        expect(validateForm(form)).toEqual([]);
    });
});

describe("form <-> query spec bijection", () => {
    const specs: QuerySpecPayload[] = [
        {
            source: "messages",
            predicates: [{ path: "sender.domain", op: "=", literal: "yahoo.com" }],
            asof_valid: null,
            asof_transaction: null,
            group_by: "sender.person",
            aggregate: "count",
            distinct_path: null,
            order: ["count", "desc"],
            limit: 15,
        },
        {
            source: "persons",
            predicates: [{ path: "function", op: "=", literal: "XML Corp. CEO" }],
            asof_valid: "2002-06-01",
            asof_transaction: "2004-12-31",
            group_by: null,
            aggregate: "count",
            distinct_path: null,
            order: null,
            limit: null,
        },
        {
            source: "messages",
            predicates: [],
            asof_valid: null,
            asof_transaction: null,
            group_by: "sender.domain",
            aggregate: "count_distinct",
            distinct_path: "sender.person",
            order: ["count", "desc"],
            limit: 10,
        },
    ];

    it("spec -> form -> spec is identity", () => {
        for (const spec of specs) {
            const form = fromQuerySpec(spec);
            expect(validateForm(form)).toEqual([]);
            expect(toQuerySpec(form)).toEqual(spec);
        }
    });

    it("form -> spec -> form is identity over valid forms", () => {
        const form = validForm();
        expect(fromQuerySpec(toQuerySpec(form))).toEqual(form);
    });
});

describe("field catalog", () => {
    it("covers all four sources with their id columns", () => {
        expect(FIELDS.messages["message_id"]).toBe("str");
        expect(FIELDS.persons["person_id"]).toBe("str");
        expect(FIELDS.institutions["institution_id"]).toBe("str");
        expect(FIELDS.reports["pub_date"]).toBe("date");
    });
});
