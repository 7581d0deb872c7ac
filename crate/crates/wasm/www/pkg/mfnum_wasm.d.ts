/* tslint:disable */
/* eslint-disable */

/**
 * Decide whether two quantum planes are isomorphic (exhaustive bounded
 * search); `q1`, `q2` are codes of nonzero elements of `F_9`.
 */
export function aq_iso(q1: number, q2: number): string;

/**
 * The quantum-plane panel: for a nonzero `q` in `F_9` (given by its code),
 * the twist orbit, the subfield bound, and both Frobenius numbers.
 */
export function aq_panel(q_code: number): string;

/**
 * Run the three transfer certificates on the shift-by-one equivalence of
 * the quantum plane with twist power `t`; returns the full report.
 */
export function aq_transfer(q_code: number, t: number): string;

/**
 * Explore `F_{p^m}`: element table with Frobenius orbits and subfield
 * degrees. Capped at 256 elements so the table stays readable.
 */
export function field_panel(p: number, m: number): string;

/**
 * Block data of a group algebra `kG` over `F_{p^m}`: splits the algebra
 * over its splitting field if needed, then reports blocks, Cartan data,
 * defects and the two Frobenius numbers.
 */
export function group_panel(group: string, p: number, m: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly aq_iso: (a: number, b: number) => [number, number];
    readonly aq_panel: (a: number) => [number, number];
    readonly aq_transfer: (a: number, b: number) => [number, number];
    readonly field_panel: (a: number, b: number) => [number, number];
    readonly group_panel: (a: number, b: number, c: number, d: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
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
