/** Thin typed client over the session HTTP API. */

import type {
    ApplicableRule,
    CheckResult,
    ExportResult,
    SessionCreated,
    SessionView,
    StepParams,
    StepResult,
    UndoResult,
} from "./types.js";

export class ApiError extends Error {
    constructor(
        readonly status: number,
        detail: string,
    ) {
        super(detail);
    }
}

type FetchLike = typeof fetch;

export class Client {
    constructor(
        private readonly base: string = "",
        private readonly fetchImpl: FetchLike = fetch,
    ) {}

    private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
        const res = await this.fetchImpl(this.base + path, {
            method,
            headers: body === undefined ? {} : { "Content-Type": "application/json" },
            body: body === undefined ? undefined : JSON.stringify(body),
        });
        const payload = await res.json().catch(() => ({}));
        if (!res.ok) {
            const detail =
                typeof payload === "object" && payload !== null && "detail" in payload
                    ? String((payload as { detail: unknown }).detail)
                    : `HTTP ${res.status}`;
            throw new ApiError(res.status, detail);
        }
        return payload as T;
    }

    createSession(ccs: string, mu?: string): Promise<SessionCreated> {
        return this.request("POST", "/sessions", mu ? { ccs, mu } : { ccs });
    }

    view(sid: string): Promise<SessionView> {
        return this.request("GET", `/sessions/${sid}`);
    }

    applicable(sid: string, path: string): Promise<ApplicableRule[]> {
        return this.request(
            "GET",
            `/sessions/${sid}/applicable?path=${encodeURIComponent(path)}`,
        );
    }

    step(
        sid: string,
        rule: string,
        target: string | null,
        params: StepParams,
        certify: boolean,
    ): Promise<StepResult> {
        const body: Record<string, unknown> = { rule, params, certify };
        if (target !== null) body.target = target;
        return this.request("POST", `/sessions/${sid}/steps`, body);
    }

    undo(sid: string): Promise<UndoResult> {
        return this.request("DELETE", `/sessions/${sid}/steps/last`);
    }

    check(sid: string, prop: string): Promise<CheckResult> {
        return this.request("POST", `/sessions/${sid}/check`, { prop });
    }

    simulate(sid: string, fromIndex: number, toIndex: number): Promise<{ holds: boolean }> {
        return this.request("POST", `/sessions/${sid}/simulate`, { fromIndex, toIndex });
    }

    export(sid: string): Promise<ExportResult> {
        return this.request("GET", `/sessions/${sid}/export`);
    }
}
