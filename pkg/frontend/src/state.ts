/** Client-side session store: a plain reducer over immutable app
 * state, so the UI layer stays a dumb render function and the logic is
 * unit-testable without a DOM. */

import type { AgentDef, CertStatus, HistoryEntry } from "./types.js";

export interface AppState {
    sessionId: string | null;
    initialFamily: AgentDef[];
    initialCount: number;
    family: AgentDef[];
    stateCount: number;
    formulas: string[];
    history: HistoryEntry[];
    selectedPath: string | null;
    error: string | null;
}

export const initialState: AppState = {
    sessionId: null,
    initialFamily: [],
    initialCount: 0,
    family: [],
    stateCount: 0,
    formulas: [],
    history: [],
    selectedPath: null,
    error: null,
};

export type AppEvent =
    | {
          kind: "session-created";
          id: string;
          family: AgentDef[];
          stateCount: number;
          formulas: string[];
      }
    | { kind: "step-applied"; entry: HistoryEntry }
    | { kind: "undone"; family: AgentDef[]; stateCount: number }
    | { kind: "cert-resolved"; index: number; status: CertStatus }
    | { kind: "path-selected"; path: string | null }
    | { kind: "error"; message: string }
    | { kind: "error-cleared" };

export function reduce(state: AppState, event: AppEvent): AppState {
    switch (event.kind) {
        case "session-created":
            return {
                ...initialState,
                sessionId: event.id,
                initialFamily: event.family,
                initialCount: event.stateCount,
                family: event.family,
                stateCount: event.stateCount,
                formulas: event.formulas,
            };
        case "step-applied":
            return {
                ...state,
                family: event.entry.family,
                stateCount: event.entry.stateCount,
                history: [...state.history, event.entry],
                selectedPath: null,
                error: null,
            };
        case "undone":
            return {
                ...state,
                family: event.family,
                stateCount: event.stateCount,
                history: state.history.slice(0, -1),
                selectedPath: null,
                error: null,
            };
        case "cert-resolved":
            return {
                ...state,
                history: state.history.map((h, i) =>
                    i === event.index ? { ...h, certified: event.status } : h,
                ),
            };
        case "path-selected":
            return { ...state, selectedPath: event.path };
        case "error":
            return { ...state, error: event.message };
        case "error-cleared":
            return { ...state, error: null };
    }
}

/** Indices of history entries still awaiting certification. */
export function pendingIndices(state: AppState): number[] {
    return state.history.flatMap((h, i) => (h.certified === "pending" ? [i] : []));
}

/** Positions selectable in an agent body: the body itself plus every
 * direct operator position, derived from the printed form.  The server
 * is the authority on deeper paths; the UI offers one level per click
 * by re-querying /applicable as the user descends. */
export function childPaths(agent: string, body: string): string[] {
    const paths = [agent];
    const arity = topLevelArity(body);
    for (let i = 0; i < arity; i++) paths.push(`${agent}:${i}`);
    return paths;
}

/** Count the direct subterm positions of a printed CCS body: summands
 * of a top-level +, both sides of a top-level |, or the single operand
 * of a prefix/restriction/hiding/relabelling. */
export function topLevelArity(body: string): number {
    const text = body.trim();
    let depth = 0;
    let plusParts = 1;
    let hasBar = false;
    for (let i = 0; i < text.length; i++) {
        const c = text[i];
        if (c === "(" || c === "[" || c === "{") depth++;
        else if (c === ")" || c === "]" || c === "}") depth--;
        else if (depth === 0 && c === "+") plusParts++;
        else if (depth === 0 && c === "|") hasBar = true;
    }
    if (plusParts > 1) return plusParts;
    if (hasBar) return 2;
    if (/[.\\/{[]/.test(text)) return 1; // prefix or postfix operator
    return 0; // constant or 0
}
