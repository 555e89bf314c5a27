/* tslint:disable */
/* eslint-disable */

/**
 * `|K(φ)|` at `samples` evenly spaced fluxes in `[0, 4π]` for walks of
 * `steps` steps from `(ai, aj)` to `(bi, bj)` on the default lattice.
 * Returns `[total_walks, sectors, |K|...]`.
 */
export function flux_curve(ai: number, aj: number, bi: number, bj: number, steps: number, samples: number): Float64Array;

/**
 * Weights of the counter-clockwise half circle of radius `r` from angle
 * `omega` and of its point inversion, as `[re, im, re_inv, im_inv]`.
 */
export function half_circle_weights(phi: number, r: number, omega: number, symmetric: boolean): Float64Array;

/**
 * Winding numbers of the closed polygon through `xy` (flat `[x0, y0, x1, y1, ...]`)
 * around each puncture in `punctures` (same layout).
 */
export function polygon_windings(xy: Float64Array, punctures: Float64Array): Int32Array;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly flux_curve: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly half_circle_weights: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly polygon_windings: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
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
