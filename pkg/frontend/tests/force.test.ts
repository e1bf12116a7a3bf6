import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";
import { describe, expect, it } from "vitest";

import { forceLayout } from "../src/force.js";
import type { GraphPayload } from "../src/types.js";

const FIXTURES = join(dirname(fileURLToPath(import.meta.url)), "fixtures");
const payload = JSON.parse(
    readFileSync(join(FIXTURES, "graph_social.json"), "utf-8"),
) as GraphPayload;

describe("force layout", () => {
    it("keeps exactly the payload's node set (positions are cosmetic)", () => {
        const ids = payload.nodes.map((n) => n.id);
        const placed = forceLayout(ids, payload.edges, 640, 480);
        expect(placed.map((n) => n.id).sort()).toEqual([...ids].sort());
    });

    it("stays inside the viewport", () => {
        const ids = payload.nodes.map((n) => n.id);
        for (const node of forceLayout(ids, payload.edges, 640, 480)) {
            expect(node.x).toBeGreaterThanOrEqual(0);
            expect(node.x).toBeLessThanOrEqual(640);
            expect(node.y).toBeGreaterThanOrEqual(0);
            expect(node.y).toBeLessThanOrEqual(480);
        }
    });

    it("is deterministic for the same graph", () => {
        const ids = payload.nodes.map((n) => n.id);
        const a = forceLayout(ids, payload.edges, 640, 480);
        const b = forceLayout(ids, payload.edges, 640, 480);
        expect(a).toEqual(b);
    });

    it("handles empty and singleton graphs", () => {
        expect(forceLayout([], [], 640, 480)).toEqual([]);
        expect(forceLayout(["solo"], [], 640, 480)).toHaveLength(1);
    });
});
