// Wire types for the warehouse API. These mirror the documented response
// bodies exactly; the UI renders them verbatim and adds nothing.

export interface ResultTable {
    columns: string[];
    rows: (string | number)[][];
    total_row_count: number;
}

export interface GraphNodePayload {
    id: string;
    label: string;
}

export interface GraphEdgePayload {
    source: string;
    target: string;
    weight: number;
}

export interface GraphPayload {
    directed: boolean;
    nodes: GraphNodePayload[];
    edges: GraphEdgePayload[];
}

export interface SnapshotPayload {
    record_id: string;
    schema: string;
    fields: Record<string, string[]>;
}

export interface IngestReportPayload {
    accepted: number;
    skipped: number;
    duplicates_dropped: number;
    skip_reasons: [number, string][];
}

export interface ApiErrorPayload {
    code: string;
    message: string;
    location?: { line: number; column: number };
}

export type Operator = "=" | "!=" | "<" | "<=" | ">" | ">=" | "contains";

export interface PredicatePayload {
    path: string;
    op: Operator;
    literal: string | number;
}

// The object form POST /query accepts; the query form serializes to this.
export interface QuerySpecPayload {
    source: string;
    predicates: PredicatePayload[];
    asof_valid: string | null;
    asof_transaction: string | null;
    group_by: string | null;
    aggregate: "count" | "count_distinct" | null;
    distinct_path: string | null;
    order: [string, "asc" | "desc"] | null;
    limit: number | null;
}
