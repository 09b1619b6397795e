/** Application bootstrap: wires the API client, the reducer and the
 * renderers to the static page skeleton in index.html. */

import { ApiError, Client } from "./api.js";
import { parseParamValue } from "./format.js";
import {
    AppState,
    initialState,
    pendingIndices,
    reduce,
} from "./state.js";
import type { AppEvent } from "./state.js";
import type { ApplicableRule, StepParams } from "./types.js";
import {
    Handlers,
    checkResultText,
    el,
    renderBanner,
    renderCheckPanel,
    renderExport,
    renderFamily,
    renderHistory,
    renderPalette,
} from "./ui.js";

const api = new Client(
    (document.querySelector("meta[name=api-base]") as HTMLMetaElement | null)?.content ?? "",
);

let state: AppState = initialState;
let palette: ApplicableRule[] = [];
let pollTimer: number | undefined;

function dispatch(event: AppEvent): void {
    state = reduce(state, event);
    render();
}

function fail(err: unknown): void {
    dispatch({
        kind: "error",
        message: err instanceof ApiError ? err.message : String(err),
    });
}

/** Poll the session view until no step is still pending, then fold the
 * resolved statuses back into local history. */
function pollCertification(): void {
    if (pollTimer !== undefined) return;
    const sid = state.sessionId;
    if (sid === null) return;
    pollTimer = window.setInterval(async () => {
        try {
            const view = await api.view(sid);
            for (const i of pendingIndices(state)) {
                const entry = view.history[i];
                if (entry && entry.certified !== "pending") {
                    dispatch({ kind: "cert-resolved", index: i, status: entry.certified });
                }
            }
            if (pendingIndices(state).length === 0) {
                window.clearInterval(pollTimer);
                pollTimer = undefined;
            }
        } catch {
            // transient; keep polling
        }
    }, 300);
}

const handlers: Handlers = {
    async onCreate(ccs, mu) {
        try {
            const res = await api.createSession(ccs, mu || undefined);
            dispatch({ kind: "session-created", ...res });
        } catch (err) {
            fail(err);
        }
    },

    async onSelectPath(path) {
        const sid = state.sessionId;
        if (sid === null) return;
        try {
            palette = await api.applicable(sid, path);
            dispatch({ kind: "path-selected", path });
        } catch (err) {
            fail(err);
        }
    },

    async onApply(rule, raw, certify) {
        const sid = state.sessionId;
        if (sid === null) return;
        try {
            const params: StepParams = {};
            for (const [k, v] of Object.entries(raw)) {
                params[k] = parseParamValue(k, v);
            }
            const res = await api.step(sid, rule.rule, rule.target, params, certify);
            palette = [];
            dispatch({
                kind: "step-applied",
                entry: {
                    rule: rule.rule,
                    target: rule.target,
                    params,
                    family: res.family,
                    stateCount: res.stateCount,
                    certified: res.certified,
                    newConstants: res.newConstants,
                },
            });
            if (res.certified === "pending") pollCertification();
        } catch (err) {
            fail(err);
        }
    },

    async onUndo() {
        const sid = state.sessionId;
        if (sid === null) return;
        try {
            const res = await api.undo(sid);
            dispatch({ kind: "undone", family: res.family, stateCount: res.stateCount });
        } catch (err) {
            fail(err);
        }
    },

    async onCheck(prop) {
        const sid = state.sessionId;
        if (sid === null) return;
        try {
            const res = await api.check(sid, prop);
            const target = document.getElementById("check-result");
            if (target) {
                target.textContent = checkResultText(prop, res, state.history.length > 0);
            }
        } catch (err) {
            fail(err);
        }
    },

    async onSimulate(fromIndex, toIndex) {
        const sid = state.sessionId;
        if (sid === null) return;
        try {
            const res = await api.simulate(sid, fromIndex, toIndex);
            const target = document.getElementById("sim-result");
            if (target) {
                target.textContent = res.holds
                    ? `snapshot ${fromIndex} is weakly simulated by snapshot ${toIndex}`
                    : `snapshot ${fromIndex} is NOT weakly simulated by snapshot ${toIndex}`;
            }
        } catch (err) {
            fail(err);
        }
    },

    async onExport() {
        const sid = state.sessionId;
        if (sid === null) return;
        try {
            const res = await api.export(sid);
            const target = document.getElementById("export-panel");
            if (target) {
                target.replaceChildren(renderExport(res));
            }
        } catch (err) {
            fail(err);
        }
    },
};

function render(): void {
    const root = document.getElementById("session");
    if (!root) return;
    root.replaceChildren(
        renderBanner(state),
        state.error ? el("div", { class: "error" }, state.error) : "",
        renderFamily(state, handlers),
        state.selectedPath !== null ? renderPalette(palette, handlers) : "",
        renderHistory(state, handlers),
        renderCheckPanel(state, handlers),
    );
}

function bindStatic(): void {
    const form = document.getElementById("create-form") as HTMLFormElement | null;
    form?.addEventListener("submit", (ev) => {
        ev.preventDefault();
        const ccs = (document.getElementById("ccs-input") as HTMLTextAreaElement).value;
        const mu = (document.getElementById("mu-input") as HTMLTextAreaElement).value;
        handlers.onCreate(ccs, mu);
    });
    document.getElementById("export-btn")?.addEventListener("click", () => handlers.onExport());
    document.getElementById("sim-btn")?.addEventListener("click", () => {
        const from = Number((document.getElementById("sim-from") as HTMLInputElement).value);
        const to = Number((document.getElementById("sim-to") as HTMLInputElement).value);
        handlers.onSimulate(from, to);
    });
}

bindStatic();
render();

export { handlers, dispatch };
