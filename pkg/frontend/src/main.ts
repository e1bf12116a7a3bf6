// DOM wiring for the analyst UI. Three panels: the query-by-example
// builder, the graph explorer with its as-of timeline, and the archive
// ingest form. Rendering goes through the pure view models in views.ts.

import { ApiError, Client } from "./api.js";
import { forceLayout } from "./force.js";
import {
    FIELDS,
    OPERATORS,
    QueryFormState,
    SOURCES,
    emptyForm,
    toQuerySpec,
    validateForm,
} from "./queryForm.js";
import type { GraphPayload, ResultTable } from "./types.js";
import {
    SortState,
    errorView,
    graphView,
    ingestReportView,
    snapshotView,
    tableView,
} from "./views.js";

const client = new Client("");

function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [key, value] of Object.entries(attrs)) {
        if (key === "class") node.className = value;
        else node.setAttribute(key, value);
    }
    node.append(...children);
    return node;
}

function option(value: string, label = value): HTMLOptionElement {
    return el("option", { value }, label);
}

function select(values: readonly string[], current: string, onChange: (v: string) => void): HTMLSelectElement {
    const node = el("select");
    values.forEach((v) => node.append(option(v)));
    node.value = current;
    node.addEventListener("change", () => onChange(node.value));
    return node;
}

// ---------------------------------------------------------------- query tab

const form: QueryFormState = emptyForm();
let lastResult: ResultTable | null = null;
let sortState: SortState = null;

function renderQueryTab(root: HTMLElement): void {
    root.replaceChildren();
    const errors = validateForm(form);

    const sourceRow = el("div", { class: "row" },
        el("label", {}, "FROM "),
        select(SOURCES, form.source, (v) => {
            form.source = v;
            form.predicates = [];
            form.groupBy = "";
            form.distinctPath = "";
            renderQueryTab(root);
        }),
    );

    const grid = el("table", { class: "qbe" },
        el("thead", {}, el("tr", {}, el("th", {}, "field"), el("th", {}, "op"), el("th", {}, "value"), el("th", {}))),
    );
    const body = el("tbody");
    const fieldNames = Object.keys(FIELDS[form.source]);
    form.predicates.forEach((pred, i) => {
        const literal = el("input", { value: pred.literal, placeholder: "value" });
        literal.addEventListener("input", () => {
            pred.literal = literal.value;
            refreshRunState(root);
        });
        const remove = el("button", { type: "button" }, "×");
        remove.addEventListener("click", () => {
            form.predicates.splice(i, 1);
            renderQueryTab(root);
        });
        body.append(el("tr", {},
            el("td", {}, select(fieldNames, pred.path, (v) => { pred.path = v; refreshRunState(root); })),
            el("td", {}, select(OPERATORS, pred.op, (v) => { pred.op = v as typeof pred.op; refreshRunState(root); })),
            el("td", {}, literal),
            el("td", {}, remove),
        ));
    });
    grid.append(body);
    const addRow = el("button", { type: "button" }, "+ predicate");
    addRow.addEventListener("click", () => {
        form.predicates.push({ path: fieldNames[0], op: "=", literal: "" });
        renderQueryTab(root);
    });

    const asofValid = el("input", { type: "date", value: form.asofValid });
    asofValid.addEventListener("change", () => { form.asofValid = asofValid.value; refreshRunState(root); });
    const asofTx = el("input", { type: "date", value: form.asofTransaction });
    asofTx.addEventListener("change", () => { form.asofTransaction = asofTx.value; refreshRunState(root); });

    const groupBy = select(["", ...fieldNames], form.groupBy, (v) => { form.groupBy = v; refreshRunState(root); });
    const aggregate = select(["", "count", "count_distinct"], form.aggregate, (v) => {
        form.aggregate = v as QueryFormState["aggregate"];
        renderQueryTab(root);
    });
    const controls = el("div", { class: "row" },
        el("label", {}, "AS OF "), asofValid,
        el("label", {}, " TX "), asofTx,
        el("label", {}, " GROUP BY "), groupBy,
        el("label", {}, " AGGREGATE "), aggregate,
    );
    if (form.aggregate === "count_distinct") {
        controls.append(el("label", {}, " DISTINCT "),
            select(fieldNames, form.distinctPath || fieldNames[0], (v) => { form.distinctPath = v; refreshRunState(root); }));
        if (!form.distinctPath) form.distinctPath = fieldNames[0];
    }

    const orderKey = select(["", "count", ...fieldNames], form.orderKey, (v) => { form.orderKey = v; refreshRunState(root); });
    const orderDir = select(["desc", "asc"], form.orderDirection, (v) => { form.orderDirection = v as "asc" | "desc"; });
    const limit = el("input", { value: form.limit, placeholder: "limit", size: "6" });
    limit.addEventListener("input", () => { form.limit = limit.value; refreshRunState(root); });

    const run = el("button", { type: "button", id: "run-query", class: "primary" }, "Run");
    run.disabled = errors.length > 0;
    run.addEventListener("click", () => runQuery(root));

    root.append(
        sourceRow, grid, addRow, controls,
        el("div", { class: "row" }, el("label", {}, "ORDER BY "), orderKey, orderDir,
            el("label", {}, " LIMIT "), limit, run),
        el("ul", { class: "errors", id: "form-errors" },
            ...errors.map((e) => el("li", {}, e))),
        el("div", { id: "query-result" }),
    );
    if (lastResult) renderResult(root.querySelector("#query-result")!, lastResult);
}

function refreshRunState(root: HTMLElement): void {
    const errors = validateForm(form);
    const list = root.querySelector("#form-errors")!;
    list.replaceChildren(...errors.map((e) => el("li", {}, e)));
    (root.querySelector("#run-query") as HTMLButtonElement).disabled = errors.length > 0;
}

async function runQuery(root: HTMLElement): Promise<void> {
    const container = root.querySelector("#query-result") as HTMLElement;
    try {
        lastResult = await client.runQuery(toQuerySpec(form));
        sortState = null;
        renderResult(container, lastResult);
    } catch (err) {
        renderError(container, err);
    }
}

function renderResult(container: HTMLElement, payload: ResultTable): void {
    const view = tableView(payload, sortState);
    const head = el("tr");
    view.columns.forEach((name, i) => {
        const th = el("th", { class: "sortable" }, name);
        th.addEventListener("click", () => {
            sortState = sortState && sortState.column === i && sortState.direction === "desc"
                ? { column: i, direction: "asc" }
                : { column: i, direction: "desc" };
            renderResult(container, payload);
        });
        head.append(th);
    });
    const table = el("table", { class: "result" }, el("thead", {}, head),
        el("tbody", {}, ...view.rows.map((row) =>
            el("tr", {}, ...row.map((cell) => el("td", {}, cell))))));
    container.replaceChildren(el("p", { class: "caption" }, view.caption), table);
}

function renderError(container: HTMLElement, err: unknown): void {
    const message = err instanceof ApiError ? errorView(err.payload) : String(err);
    container.replaceChildren(el("p", { class: "error" }, message));
}

// ---------------------------------------------------------------- graph tab

const graphState = {
    kind: "social" as "social" | "answering" | "coauthors",
    level: "person",
    person: "",
    asof: "2002-06-01",
    selectedNode: null as string | null,
    payload: null as GraphPayload | null,
};

const SLIDER_START = Date.UTC(2000, 0, 1);
const DAY = 24 * 3600 * 1000;

function sliderDate(days: number): string {
    return new Date(SLIDER_START + days * DAY).toISOString().slice(0, 10);
}

function renderGraphTab(root: HTMLElement): void {
    root.replaceChildren();
    const kind = select(["social", "answering", "coauthors"], graphState.kind, (v) => {
        graphState.kind = v as typeof graphState.kind;
        graphState.payload = null;
        graphState.selectedNode = null;
        renderGraphTab(root);
    });
    const controls = el("div", { class: "row" }, el("label", {}, "graph "), kind);
    if (graphState.kind === "social") {
        controls.append(el("label", {}, " level "),
            select(["person", "institution"], graphState.level, (v) => { graphState.level = v; }));
    }
    if (graphState.kind === "answering") {
        const person = el("input", { value: graphState.person, placeholder: "person id" });
        person.addEventListener("input", () => { graphState.person = person.value; });
        controls.append(el("label", {}, " person "), person);
    }
    const load = el("button", { type: "button", class: "primary" }, "Load");
    load.addEventListener("click", () => loadGraph(root));
    controls.append(load);

    const days = Math.round((Date.parse(graphState.asof) - SLIDER_START) / DAY);
    const slider = el("input", {
        type: "range", min: "0", max: "3650", value: String(days), id: "asof-slider",
    });
    const sliderLabel = el("span", { id: "asof-label" }, graphState.asof);
    slider.addEventListener("input", async () => {
        graphState.asof = sliderDate(parseInt(slider.value, 10));
        sliderLabel.textContent = graphState.asof;
        if (graphState.selectedNode) await showSnapshot(root, graphState.selectedNode);
    });

    const canvas = document.createElementNS("http://www.w3.org/2000/svg", "svg");
    canvas.setAttribute("id", "graph-canvas");
    canvas.setAttribute("width", "640");
    canvas.setAttribute("height", "480");
    root.append(
        controls,
        el("div", { class: "row" }, el("label", {}, "as-of "), slider, sliderLabel),
        el("p", { class: "caption", id: "graph-caption" }),
        el("div", { class: "split" },
            canvas,
            el("div", { id: "snapshot-panel", class: "panel" }, "click a node for its as-of snapshot"),
        ),
    );
    if (graphState.payload) drawGraph(root, graphState.payload);
}

async function loadGraph(root: HTMLElement): Promise<void> {
    const params: Record<string, string> = {};
    if (graphState.kind === "social") params.level = graphState.level;
    if (graphState.kind === "answering") params.person = graphState.person;
    try {
        graphState.payload = await client.graph(graphState.kind, params);
        drawGraph(root, graphState.payload);
    } catch (err) {
        renderError(root.querySelector("#snapshot-panel") as HTMLElement, err);
    }
}

function drawGraph(root: HTMLElement, payload: GraphPayload): void {
    const view = graphView(payload);
    (root.querySelector("#graph-caption") as HTMLElement).textContent = view.caption;
    const svg = root.querySelector("#graph-canvas")!;
    const SVG_NS = "http://www.w3.org/2000/svg";
    svg.replaceChildren();
    const positions = new Map(
        forceLayout(view.nodes.map((n) => n.id), view.edges, 640, 480).map((n) => [n.id, n]),
    );
    for (const edge of view.edges) {
        const a = positions.get(edge.source)!;
        const b = positions.get(edge.target)!;
        const line = document.createElementNS(SVG_NS, "line");
        line.setAttribute("x1", String(a.x));
        line.setAttribute("y1", String(a.y));
        line.setAttribute("x2", String(b.x));
        line.setAttribute("y2", String(b.y));
        line.setAttribute("stroke-width", String(Math.min(6, edge.weight)));
        line.setAttribute("class", "edge");
        const title = document.createElementNS(SVG_NS, "title");
        title.textContent = edge.title; // hover shows the weight
        line.append(title);
        svg.append(line);
    }
    for (const node of view.nodes) {
        const pos = positions.get(node.id)!;
        const group = document.createElementNS(SVG_NS, "g");
        group.setAttribute("class", "node");
        const circle = document.createElementNS(SVG_NS, "circle");
        circle.setAttribute("cx", String(pos.x));
        circle.setAttribute("cy", String(pos.y));
        circle.setAttribute("r", "7");
        const label = document.createElementNS(SVG_NS, "text");
        label.setAttribute("x", String(pos.x + 9));
        label.setAttribute("y", String(pos.y + 4));
        label.textContent = node.label;
        group.append(circle, label);
        group.addEventListener("click", () => {
            graphState.selectedNode = node.id;
            void showSnapshot(root, node.id);
        });
        svg.append(group);
    }
}

async function showSnapshot(root: HTMLElement, nodeId: string): Promise<void> {
    const panel = root.querySelector("#snapshot-panel") as HTMLElement;
    try {
        const payload = await client.personSnapshot(nodeId, graphState.asof);
        const view = snapshotView(payload, graphState.asof);
        panel.replaceChildren(
            el("h3", {}, view.title),
            view.empty
                ? el("p", { class: "caption" }, "nothing recorded for this date")
                : el("table", { class: "result" }, el("tbody", {},
                    ...view.rows.map((row) => el("tr", {},
                        el("td", {}, row.field),
                        el("td", {}, row.values.join(", ")))))),
        );
    } catch (err) {
        renderError(panel, err);
    }
}

// --------------------------------------------------------------- ingest tab

function renderIngestTab(root: HTMLElement): void {
    root.replaceChildren();
    const file = el("input", { type: "file", id: "ingest-file" });
    const listId = el("input", { placeholder: "list id", value: "xquery" });
    const upload = el("button", { type: "button", class: "primary" }, "Upload");
    const result = el("div", { id: "ingest-result" });
    upload.addEventListener("click", async () => {
        const chosen = (file as HTMLInputElement).files?.[0];
        if (!chosen || !listId.value) {
            result.replaceChildren(el("p", { class: "error" }, "pick a file and a list id"));
            return;
        }
        try {
            const view = ingestReportView(await client.ingest(chosen, listId.value));
            result.replaceChildren(
                el("table", { class: "result" }, el("tbody", {},
                    ...view.lines.map((line) => el("tr", {},
                        el("td", {}, line.label), el("td", {}, line.value))))),
                el("ul", {}, ...view.skipDetails.map((d) => el("li", {}, d))),
            );
        } catch (err) {
            renderError(result, err);
        }
    });
    root.append(
        el("div", { class: "row" }, el("label", {}, "archive "), file,
            el("label", {}, " list "), listId, upload),
        result,
    );
}

// ------------------------------------------------------------------- shell

function mount(): void {
    const tabs: [string, (root: HTMLElement) => void][] = [
        ["Query", renderQueryTab],
        ["Graphs", renderGraphTab],
        ["Ingest", renderIngestTab],
    ];
    const nav = document.getElementById("tabs")!;
    const content = document.getElementById("content")!;
    tabs.forEach(([name, render], i) => {
        const button = el("button", { type: "button" }, name);
        button.addEventListener("click", () => {
            nav.querySelectorAll("button").forEach((b) => b.classList.remove("active"));
            button.classList.add("active");
            render(content);
        });
        nav.append(button);
        if (i === 0) {
            button.classList.add("active");
            render(content);
        }
    });
}

document.addEventListener("DOMContentLoaded", mount);
