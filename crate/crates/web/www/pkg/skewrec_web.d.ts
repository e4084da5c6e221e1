/* tslint:disable */
/* eslint-disable */

/**
 * Companion matrix of a reciprocal `poly`, or of a skew-reciprocal one
 * when `anti` is set.
 */
export function companion_json(poly: string, anti: boolean): string;

/**
 * Mahler measure, house and root disks of `poly`, for plotting against
 * the unit circle.
 */
export function measure_json(poly: string, tol: number): string;

/**
 * Exhaustive minimum of the Mahler measure (or house) over a small space.
 */
export function search_json(kind: string, degree: number, height: number, house: boolean, tol: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly companion_json: (a: number, b: number, c: number) => [number, number];
    readonly measure_json: (a: number, b: number, c: number) => [number, number];
    readonly search_json: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
