/** DOM rendering: pure functions from state to element trees.  All
 * interaction is routed through callbacks supplied by main.ts. */

import { banner, certBadge, stepLine } from "./format.js";
import type { AppState } from "./state.js";
import { childPaths } from "./state.js";
import type { ApplicableRule, CheckResult, ExportResult } from "./types.js";

export interface Handlers {
    onCreate(ccs: string, mu: string): void;
    onSelectPath(path: string): void;
    onApply(rule: ApplicableRule, raw: Record<string, string>, certify: boolean): void;
    onUndo(): void;
    onCheck(prop: string): void;
    onSimulate(fromIndex: number, toIndex: number): void;
    onExport(): void;
}

export function el<K extends keyof HTMLElementTagNameMap>(
    tag: K,
    attrs: Record<string, string> = {},
    ...children: (Node | string)[]
): HTMLElementTagNameMap[K] {
    const node = document.createElement(tag);
    for (const [k, v] of Object.entries(attrs)) {
        if (k === "class") node.className = v;
        else node.setAttribute(k, v);
    }
    node.append(...children);
    return node;
}

export function renderBanner(state: AppState): HTMLElement {
    return el(
        "div",
        { class: "banner", id: "banner" },
        state.sessionId === null
            ? "no session"
            : banner(state.initialCount, state.stateCount),
    );
}

export function renderFamily(state: AppState, h: Handlers): HTMLElement {
    const list = el("ul", { class: "family" });
    for (const def of state.family) {
        const item = el("li", {});
        for (const path of childPaths(def.name, def.body)) {
            const cls = state.selectedPath === path ? "path selected" : "path";
            const btn = el("button", { class: cls, "data-path": path }, path);
            btn.addEventListener("click", () => h.onSelectPath(path));
            item.append(btn);
        }
        item.append(el("code", {}, ` ${def.name} = ${def.body}`));
        list.append(item);
    }
    return list;
}

export function renderPalette(
    rules: ApplicableRule[],
    h: Handlers,
): HTMLElement {
    const box = el("div", { class: "palette" });
    if (rules.length === 0) {
        box.append(el("p", {}, "no applicable rules here"));
        return box;
    }
    for (const rule of rules) {
        const form = el("form", { class: "rule" });
        form.append(el("strong", {}, rule.rule));
        if (rule.note) form.append(el("small", {}, ` ${rule.note}`));
        const inputs: Record<string, HTMLInputElement> = {};
        for (const p of rule.requiredParams) {
            const input = el("input", {
                name: p,
                placeholder: p === "f" ? `${p} (new/old, ...)` : p,
            });
            inputs[p] = input;
            form.append(input);
        }
        const certify = el("input", { type: "checkbox", name: "certify" });
        form.append(el("label", {}, certify, "certify"));
        form.append(el("button", { type: "submit" }, "apply"));
        form.addEventListener("submit", (ev) => {
            ev.preventDefault();
            const raw: Record<string, string> = {};
            for (const [k, input] of Object.entries(inputs)) raw[k] = input.value;
            h.onApply(rule, raw, certify.checked);
        });
        box.append(form);
    }
    return box;
}

export function renderHistory(state: AppState, h: Handlers): HTMLElement {
    const box = el("div", { class: "history" });
    const list = el("ol", { start: "1" });
    state.history.forEach((entry) => {
        list.append(
            el(
                "li",
                {},
                el("code", {}, stepLine(entry.rule, entry.target, entry.params)),
                el("span", { class: `cert ${entry.certified}` }, ` ${certBadge(entry.certified)}`),
                el("span", { class: "count" }, ` → ${entry.stateCount} states`),
            ),
        );
    });
    box.append(list);
    if (state.history.length > 0) {
        const undo = el("button", { class: "undo" }, "undo last step");
        undo.addEventListener("click", () => h.onUndo());
        box.append(undo);
    }
    return box;
}

export function renderCheckPanel(state: AppState, h: Handlers): HTMLElement {
    const box = el("div", { class: "check" });
    for (const prop of state.formulas) {
        const btn = el("button", {}, `check ${prop}`);
        btn.addEventListener("click", () => h.onCheck(prop));
        box.append(btn);
    }
    box.append(el("div", { id: "check-result" }));
    return box;
}

export function checkResultText(prop: string, res: CheckResult, abstracted: boolean): string {
    let text = `${prop}: ${res.holds ? "holds" : "fails"} (fragment: ${res.fragment})`;
    if (abstracted && res.fragment !== "muILBox") {
        text +=
            " — warning: outside the preserved fragment, a result on the" +
            " abstraction does not transfer to the original system";
    }
    return text;
}

export function renderExport(res: ExportResult): HTMLElement {
    return el(
        "div",
        { class: "export" },
        el("h3", {}, "script"),
        el("pre", { id: "export-abst" }, res.abst),
        el("h3", {}, "final family"),
        el("pre", { id: "export-family" }, res.finalFamily),
    );
}
