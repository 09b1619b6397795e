import { describe, expect, it } from "vitest";

import {
    AppEvent,
    AppState,
    childPaths,
    initialState,
    pendingIndices,
    reduce,
    topLevelArity,
} from "../src/state.js";
import type { HistoryEntry } from "../src/types.js";

const fam = [{ name: "A", body: "a.A" }];

function created(): AppState {
    return reduce(initialState, {
        kind: "session-created",
        id: "1",
        family: fam,
        stateCount: 154,
        formulas: ["Cycle"],
    });
}

function entry(overrides: Partial<HistoryEntry> = {}): HistoryEntry {
    return {
        rule: "par-hide",
        target: "Dekker",
        params: { K: ["kr1"] },
        family: fam,
        stateCount: 120,
        certified: "skipped",
        newConstants: [],
        ...overrides,
    };
}

describe("reduce", () => {
    it("resets everything on session creation", () => {
        const s = created();
        expect(s.sessionId).toBe("1");
        expect(s.initialCount).toBe(154);
        expect(s.stateCount).toBe(154);
        expect(s.history).toEqual([]);
        expect(s.formulas).toEqual(["Cycle"]);
    });

    it("appends steps and tracks the current count", () => {
        const s = reduce(created(), { kind: "step-applied", entry: entry() });
        expect(s.history).toHaveLength(1);
        expect(s.stateCount).toBe(120);
        expect(s.initialCount).toBe(154);
        expect(s.selectedPath).toBeNull();
    });

    it("undo pops exactly one entry", () => {
        let s = reduce(created(), { kind: "step-applied", entry: entry() });
        s = reduce(s, { kind: "step-applied", entry: entry({ stateCount: 16 }) });
        s = reduce(s, { kind: "undone", family: fam, stateCount: 120 });
        expect(s.history).toHaveLength(1);
        expect(s.stateCount).toBe(120);
    });

    it("resolves pending certification by index", () => {
        let s = reduce(created(), {
            kind: "step-applied",
            entry: entry({ certified: "pending" }),
        });
        s = reduce(s, { kind: "step-applied", entry: entry() });
        expect(pendingIndices(s)).toEqual([0]);
        s = reduce(s, { kind: "cert-resolved", index: 0, status: "certified" });
        expect(pendingIndices(s)).toEqual([]);
        expect(s.history[0]!.certified).toBe("certified");
        expect(s.history[1]!.certified).toBe("skipped");
    });

    it("stores and clears errors", () => {
        let s = reduce(created(), { kind: "error", message: "boom" });
        expect(s.error).toBe("boom");
        s = reduce(s, { kind: "error-cleared" });
        expect(s.error).toBeNull();
    });

    it("step application clears a previous error", () => {
        let s = reduce(created(), { kind: "error", message: "boom" });
        s = reduce(s, { kind: "step-applied", entry: entry() });
        expect(s.error).toBeNull();
    });
});

describe("topLevelArity", () => {
    it("counts summands of a top-level sum", () => {
        expect(topLevelArity("a.0 + b.0 + c.0")).toBe(3);
    });

    it("treats parallel composition as binary", () => {
        expect(topLevelArity("(P1 | P2 | B1f)\\shared")).toBe(1);
        expect(topLevelArity("P1 | P2")).toBe(2);
    });

    it("ignores operators inside brackets", () => {
        expect(topLevelArity("a.(b.0 + c.0)")).toBe(1);
    });

    it("gives zero for constants and nil", () => {
        expect(topLevelArity("0")).toBe(0);
        expect(topLevelArity("P11")).toBe(0);
    });
});

describe("childPaths", () => {
    it("offers the root and one path per direct position", () => {
        expect(childPaths("A", "a.0 + b.0")).toEqual(["A", "A:0", "A:1"]);
        expect(childPaths("A", "P11")).toEqual(["A"]);
    });
});
