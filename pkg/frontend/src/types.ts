/** Wire types for the ccsabst session API. */

export interface AgentDef {
    name: string;
    body: string;
}

export type CertStatus = "certified" | "failed" | "pending" | "skipped";

export interface SessionCreated {
    id: string;
    family: AgentDef[];
    stateCount: number;
    formulas: string[];
}

export interface HistoryEntry {
    rule: string;
    target: string | null;
    params: Record<string, unknown>;
    family: AgentDef[];
    stateCount: number;
    certified: CertStatus;
    newConstants: string[];
}

export interface SessionView {
    id: string;
    family: AgentDef[];
    initialFamily: AgentDef[];
    stateCount: number;
    formulas: string[];
    history: HistoryEntry[];
}

export interface ApplicableRule {
    rule: string;
    target: string | null;
    requiredParams: string[];
    note: string;
}

/** Step parameters as sent on the wire: an action-set param is a list
 * of action strings (conames prefixed with '), a relabelling is a
 * name-to-name map, anything else a plain string. */
export type StepParams = Record<string, string[] | Record<string, string> | string>;

export interface StepResult {
    index: number;
    family: AgentDef[];
    stateCount: number;
    certified: CertStatus;
    newConstants: string[];
}

export interface UndoResult {
    family: AgentDef[];
    stateCount: number;
    historyLength: number;
}

export interface CheckResult {
    holds: boolean;
    fragment: string;
}

export interface ExportResult {
    ccs: string;
    abst: string;
    finalFamily: string;
}
