// Thin fetch client for the warehouse service. Errors are surfaced as
// ApiError with the body's code/message/location when the service
// provided one.

import type {
    ApiErrorPayload,
    GraphPayload,
    IngestReportPayload,
    QuerySpecPayload,
    ResultTable,
    SnapshotPayload,
} from "./types.js";

export class ApiError extends Error {
    payload: ApiErrorPayload;

    constructor(payload: ApiErrorPayload) {
        super(payload.message);
        this.payload = payload;
    }
}

async function unwrap<T>(response: Response): Promise<T> {
    if (response.ok) {
        return (await response.json()) as T;
    }
    let payload: ApiErrorPayload;
    try {
        payload = (await response.json()) as ApiErrorPayload;
    } catch {
        payload = { code: "http_error", message: `${response.status} ${response.statusText}` };
    }
    throw new ApiError(payload);
}

export class Client {
    constructor(private base: string = "") {}

    runQuery(spec: QuerySpecPayload): Promise<ResultTable> {
        return fetch(`${this.base}/query`, {
            method: "POST",
            headers: { "Content-Type": "application/json" },
            body: JSON.stringify(spec),
        }).then((r) => unwrap<ResultTable>(r));
    }

    personSnapshot(id: string, asof: string, tx?: string): Promise<SnapshotPayload> {
        const params = new URLSearchParams({ asof });
        if (tx) params.set("tx", tx);
        return fetch(`${this.base}/persons/${encodeURIComponent(id)}?${params}`).then((r) =>
            unwrap<SnapshotPayload>(r),
        );
    }

    graph(kind: "social" | "answering" | "coauthors", params: Record<string, string> = {}): Promise<GraphPayload> {
        const search = new URLSearchParams(params).toString();
        return fetch(`${this.base}/graphs/${kind}${search ? "?" + search : ""}`).then((r) =>
            unwrap<GraphPayload>(r),
        );
    }

    table(kind: string): Promise<ResultTable> {
        return fetch(`${this.base}/tables/${kind}`).then((r) => unwrap<ResultTable>(r));
    }

    ingest(file: File, listId: string): Promise<IngestReportPayload> {
        const form = new FormData();
        form.append("file", file);
        form.append("list_id", listId);
        return fetch(`${this.base}/ingest`, { method: "POST", body: form }).then((r) =>
            unwrap<IngestReportPayload>(r),
        );
    }
}
