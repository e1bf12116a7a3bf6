// Small deterministic force layout: spring edges, pairwise repulsion,
// centering. Positions are presentation only; node/edge identity always
// comes from the payload, which is why tests check sets, not
// coordinates.

export interface LayoutNode {
    id: string;
    x: number;
    y: number;
}

interface Edge {
    source: string;
    target: string;
    weight: number;
}

// Deterministic PRNG so re-rendering the same graph looks the same.
function mulberry32(seed: number): () => number {
    let a = seed >>> 0;
    return () => {
        a = (a + 0x6d2b79f5) >>> 0;
        let t = a;
        t = Math.imul(t ^ (t >>> 15), t | 1);
        t ^= t + Math.imul(t ^ (t >>> 7), t | 61);
        return ((t ^ (t >>> 14)) >>> 0) / 4294967296;
    };
}

export function forceLayout(
    ids: string[],
    edges: Edge[],
    width: number,
    height: number,
    iterations = 150,
): LayoutNode[] {
    const rand = mulberry32(ids.length * 2654435761 + edges.length);
    const nodes: LayoutNode[] = ids.map((id) => ({
        id,
        x: width * (0.2 + 0.6 * rand()),
        y: height * (0.2 + 0.6 * rand()),
    }));
    const index = new Map(nodes.map((n, i) => [n.id, i]));
    const springLength = Math.min(width, height) / Math.max(2, Math.sqrt(ids.length));

    for (let step = 0; step < iterations; step++) {
        const cool = 1 - step / iterations;
        const fx = new Array(nodes.length).fill(0);
        const fy = new Array(nodes.length).fill(0);

        for (let i = 0; i < nodes.length; i++) {
            for (let j = i + 1; j < nodes.length; j++) {
                const dx = nodes[i].x - nodes[j].x;
                const dy = nodes[i].y - nodes[j].y;
                const d2 = Math.max(25, dx * dx + dy * dy);
                const push = (springLength * springLength) / d2;
                const d = Math.sqrt(d2);
                fx[i] += (dx / d) * push * 8;
                fy[i] += (dy / d) * push * 8;
                fx[j] -= (dx / d) * push * 8;
                fy[j] -= (dy / d) * push * 8;
            }
        }
        for (const edge of edges) {
            const i = index.get(edge.source);
            const j = index.get(edge.target);
            if (i === undefined || j === undefined || i === j) continue;
            const dx = nodes[j].x - nodes[i].x;
            const dy = nodes[j].y - nodes[i].y;
            const d = Math.max(5, Math.hypot(dx, dy));
            const pull = ((d - springLength) / d) * 0.05 * Math.min(edge.weight, 5);
            fx[i] += dx * pull;
            fy[i] += dy * pull;
            fx[j] -= dx * pull;
            fy[j] -= dy * pull;
        }
        for (let i = 0; i < nodes.length; i++) {
            fx[i] += (width / 2 - nodes[i].x) * 0.01;
            fy[i] += (height / 2 - nodes[i].y) * 0.01;
            nodes[i].x += Math.max(-10, Math.min(10, fx[i])) * cool;
            nodes[i].y += Math.max(-10, Math.min(10, fy[i])) * cool;
            nodes[i].x = Math.max(20, Math.min(width - 20, nodes[i].x));
            nodes[i].y = Math.max(20, Math.min(height - 20, nodes[i].y));
        }
    }
    return nodes;
}
