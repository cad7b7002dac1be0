/* tslint:disable */
/* eslint-disable */

/**
 * Ledger and figures of merit of one limit cycle.
 */
export class CycleReport {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    /**
     * NaN unless the cycle is an engine.
     */
    readonly efficiency: number;
    readonly eta_ca: number;
    readonly eta_carnot: number;
    readonly eta_otto: number;
    readonly iterations: number;
    readonly kind: string;
    /**
     * [Q_h, W1, Q_c, W2] in stroke order.
     */
    readonly ledger: Float64Array;
    readonly power: number;
    /**
     * "ok", "nonconverged" or the reason no cycle exists.
     */
    readonly status: string;
}

/**
 * Power along a level scan, with the single-qubit maximum power at the
 * same temperatures as the reference line.
 */
export class PowerCurve {
    private constructor();
    free(): void;
    [Symbol.dispose](): void;
    readonly argmax: number;
    readonly baseline: number;
    /**
     * 1 where the point runs as an engine.
     */
    readonly engine: Uint8Array;
    readonly levels: Float64Array;
    readonly p_max: number;
    /**
     * P at each level; NaN where no limit cycle was reached.
     */
    readonly power: Float64Array;
}

/**
 * `level` is ω_h/ω_c for the single qubit, ω₁ᶜ/ω_c otherwise.
 */
export function limit_cycle(model_name: string, t_hot: number, level: number, g: number): CycleReport;

/**
 * Machine type over a grid, row-major with x fastest.
 *
 * Single qubit: x = ω_h/ω_c, y = T_h/T_c. Coupled models: x = ω₁ᶜ/ω_c,
 * y = g, at hot temperature `t_hot`.
 */
export function phase_diagram(model_name: string, t_hot: number, x_start: number, x_stop: number, x_step: number, y_start: number, y_stop: number, y_step: number): Uint8Array;

export function power_curve(model_name: string, t_hot: number, g: number, start: number, stop: number, step: number): PowerCurve;

/**
 * Number of points a scan produces, for sizing the canvas.
 */
export function scan_len(start: number, stop: number, step: number): number;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_cyclereport_free: (a: number, b: number) => void;
    readonly __wbg_powercurve_free: (a: number, b: number) => void;
    readonly cyclereport_efficiency: (a: number) => number;
    readonly cyclereport_eta_ca: (a: number) => number;
    readonly cyclereport_eta_carnot: (a: number) => number;
    readonly cyclereport_eta_otto: (a: number) => number;
    readonly cyclereport_iterations: (a: number) => number;
    readonly cyclereport_kind: (a: number) => [number, number];
    readonly cyclereport_ledger: (a: number) => [number, number];
    readonly cyclereport_power: (a: number) => number;
    readonly cyclereport_status: (a: number) => [number, number];
    readonly limit_cycle: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
    readonly phase_diagram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
    readonly power_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
    readonly powercurve_argmax: (a: number) => number;
    readonly powercurve_baseline: (a: number) => number;
    readonly powercurve_engine: (a: number) => [number, number];
    readonly powercurve_levels: (a: number) => [number, number];
    readonly powercurve_p_max: (a: number) => number;
    readonly powercurve_power: (a: number) => [number, number];
    readonly scan_len: (a: number, b: number, c: number) => [number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_start: () => void;
}

export type SyncInitInput = BufferSource | WebAssembly.Module;

/**
 * Instantiates the given `module`, which can either be bytes or
 * a precompiled `WebAssembly.Module`.
 *
 * @param {{ module: SyncInitInput }} module - Passing `SyncInitInput` directly is deprecated.
 *
 * @returns {InitOutput}
 */
export function initSync(module: { module: SyncInitInput } | SyncInitInput): InitOutput;

/**
 * If `module_or_path` is {RequestInfo} or {URL}, makes a request and
 * for everything else, calls `WebAssembly.instantiate` directly.
 *
 * @param {{ module_or_path: InitInput | Promise<InitInput> }} module_or_path - Passing `InitInput` directly is deprecated.
 *
 * @returns {Promise<InitOutput>}
 */
export default function __wbg_init (module_or_path?: { module_or_path: InitInput | Promise<InitInput> } | InitInput | Promise<InitInput>): Promise<InitOutput>;
