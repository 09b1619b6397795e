/** Pure helpers: parsing user-entered rule parameters into wire form,
 * and rendering history steps back to script text for display. */

import type { StepParams } from "./types.js";

/** Parse one parameter value typed into the palette.
 *
 * - `K`-style action sets are entered as `a, 'b, c` (or `{a, 'b}`)
 *   and become a sorted list of action strings;
 * - `f`-style relabellings are entered as `new/old, new2/old2` and
 *   become an old-to-new map keyed as the service expects;
 * - anything else (constant names, paths) passes through as a string.
 */
export function parseParamValue(
    key: string,
    raw: string,
): string[] | Record<string, string> | string {
    const text = raw.trim().replace(/^\{/, "").replace(/\}$/, "");
    if (key === "K" || key === "L") {
        const acts = text
            .split(",")
            .map((s) => s.trim())
            .filter((s) => s.length > 0);
        return sortActions(acts);
    }
    if (key === "f") {
        const pairs: Record<string, string> = {};
        for (const part of text.split(",")) {
            const bit = part.trim();
            if (!bit) continue;
            const m = bit.match(/^([A-Za-z_]\w*)\s*\/\s*([A-Za-z_]\w*)$/);
            if (!m) throw new Error(`bad relabelling entry "${bit}" (want new/old)`);
            pairs[m[2]!] = m[1]!;
        }
        return pairs;
    }
    return text;
}

/** Sort action strings the way the canonical printer does: conames
 * (leading ') before names, then alphabetically by label. */
export function sortActions(acts: string[]): string[] {
    const keyOf = (a: string): [number, string] =>
        a.startsWith("'") ? [0, a.slice(1)] : [1, a];
    return [...acts].sort((x, y) => {
        const [kx, lx] = keyOf(x);
        const [ky, ly] = keyOf(y);
        return kx - ky || (lx < ly ? -1 : lx > ly ? 1 : 0);
    });
}

/** Render a history step as one canonical script line, matching the
 * `.abst` format the service exports. */
export function stepLine(
    rule: string,
    target: string | null,
    params: Record<string, unknown>,
): string {
    let line = `step ${rule}`;
    if (target) line += ` target=${target}`;
    for (const key of Object.keys(params).sort()) {
        const value = params[key];
        if (Array.isArray(value)) {
            line += ` ${key}={${sortActions(value as string[]).join(",")}}`;
        } else if (value !== null && typeof value === "object") {
            const pairs = Object.entries(value as Record<string, string>)
                .sort(([a], [b]) => (a < b ? -1 : a > b ? 1 : 0))
                .map(([old, neu]) => `${neu}/${old}`);
            line += ` ${key}=[${pairs.join(",")}]`;
        } else {
            line += ` ${key}=${String(value)}`;
        }
    }
    return line;
}

/** The headline banner: "154 -> 16 states". */
export function banner(initialCount: number, currentCount: number): string {
    if (initialCount === currentCount) return `${currentCount} states`;
    return `${initialCount} → ${currentCount} states`;
}

export function certBadge(status: string): string {
    switch (status) {
        case "certified": return "✓ certified";
        case "failed": return "✗ failed";
        case "pending": return "… certifying";
        default: return "not certified";
    }
}
