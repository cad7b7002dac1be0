/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_cyclereport_free: (a: number, b: number) => void;
export const __wbg_powercurve_free: (a: number, b: number) => void;
export const cyclereport_efficiency: (a: number) => number;
export const cyclereport_eta_ca: (a: number) => number;
export const cyclereport_eta_carnot: (a: number) => number;
export const cyclereport_eta_otto: (a: number) => number;
export const cyclereport_iterations: (a: number) => number;
export const cyclereport_kind: (a: number) => [number, number];
export const cyclereport_ledger: (a: number) => [number, number];
export const cyclereport_power: (a: number) => number;
export const cyclereport_status: (a: number) => [number, number];
export const limit_cycle: (a: number, b: number, c: number, d: number, e: number) => [number, number, number];
export const phase_diagram: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: number) => [number, number, number, number];
export const power_curve: (a: number, b: number, c: number, d: number, e: number, f: number, g: number) => [number, number, number];
export const powercurve_argmax: (a: number) => number;
export const powercurve_baseline: (a: number) => number;
export const powercurve_engine: (a: number) => [number, number];
export const powercurve_levels: (a: number) => [number, number];
export const powercurve_p_max: (a: number) => number;
export const powercurve_power: (a: number) => [number, number];
export const scan_len: (a: number, b: number, c: number) => [number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
