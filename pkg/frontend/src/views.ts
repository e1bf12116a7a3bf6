// Pure view models: every string and number below is lifted verbatim
// from an API payload. The UI layers DOM on top of these and computes
// nothing itself, which is what the contract tests pin down.

import type {
    ApiErrorPayload,
    GraphPayload,
    IngestReportPayload,
    ResultTable,
    SnapshotPayload,
} from "./types.js";

export interface TableView {
    columns: string[];
    rows: string[][];
    caption: string;
}

export type SortState = { column: number; direction: "asc" | "desc" } | null;

export function tableView(payload: ResultTable, sort: SortState = null): TableView {
    let rows = payload.rows.map((row) => row.map((cell) => String(cell)));
    if (sort) {
        const { column, direction } = sort;
        const numeric = payload.rows.every((r) => typeof r[column] === "number");
        rows = [...rows].sort((a, b) => {
            const cmp = numeric
                ? Number(a[column]) - Number(b[column])
                : a[column].localeCompare(b[column]);
            return direction === "asc" ? cmp : -cmp;
        });
    }
    return {
        columns: payload.columns,
        rows,
        caption: `${payload.total_row_count} rows`,
    };
}

export interface GraphView {
    directed: boolean;
    nodes: { id: string; label: string }[];
    edges: { source: string; target: string; weight: number; title: string }[];
    caption: string;
}

export function graphView(payload: GraphPayload): GraphView {
    const arrow = payload.directed ? "→" : "—";
    return {
        directed: payload.directed,
        nodes: payload.nodes.map(({ id, label }) => ({ id, label })),
        edges: payload.edges.map((e) => ({
            ...e,
            title: `${e.source} ${arrow} ${e.target}: ${e.weight}`,
        })),
        caption: `${payload.nodes.length} nodes, ${payload.edges.length} edges`,
    };
}

export interface SnapshotView {
    title: string;
    rows: { field: string; values: string[] }[];
    empty: boolean;
}

export function snapshotView(payload: SnapshotPayload, asof: string): SnapshotView {
    const rows = Object.keys(payload.fields)
        .sort()
        .map((field) => ({ field, values: payload.fields[field] }));
    return {
        title: `${payload.record_id} as of ${asof}`,
        rows,
        empty: rows.length === 0,
    };
}

export interface ReportView {
    lines: { label: string; value: string }[];
    skipDetails: string[];
}

export function ingestReportView(payload: IngestReportPayload): ReportView {
    return {
        lines: [
            { label: "accepted", value: String(payload.accepted) },
            { label: "skipped", value: String(payload.skipped) },
            { label: "duplicates dropped", value: String(payload.duplicates_dropped) },
        ],
        skipDetails: payload.skip_reasons.map(([offset, reason]) => `@${offset}: ${reason}`),
    };
}

export function errorView(payload: ApiErrorPayload): string {
    if (payload.location) {
        return `${payload.message} (line ${payload.location.line}, column ${payload.location.column})`;
    }
    return payload.message;
}
