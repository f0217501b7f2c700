/* tslint:disable */
/* eslint-disable */

export class Demo {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Flat `x0, y0, x1, y1, …`.
     */
    coordinates(): Float64Array;
    /**
     * Flat `a0, b0, a1, b1, …` over undirected edges.
     */
    edge_list(): Uint32Array;
    is_empty(): boolean;
    len(): number;
    monte_carlo_gap(walks: number, seed: bigint): number;
    /**
     * Index of the point closest to `(x, y)`.
     */
    nearest(x: number, y: number): number;
    constructor(per_moon: number, noise: number, k: number, seed: bigint);
    propagate(method: string): Float64Array;
    /**
     * Seed label per node, -1 where unseeded.
     */
    seed_labels(): Int32Array;
    /**
     * Cycles node `i` through unseeded, label 0, label 1.
     */
    toggle_seed(i: number): void;
    trace(solver: string): Float64Array;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_demo_free: (a: number, b: number) => void;
    readonly demo_coordinates: (a: number) => [number, number];
    readonly demo_edge_list: (a: number) => [number, number];
    readonly demo_is_empty: (a: number) => number;
    readonly demo_len: (a: number) => number;
    readonly demo_monte_carlo_gap: (a: number, b: number, c: bigint) => [number, number, number];
    readonly demo_nearest: (a: number, b: number, c: number) => number;
    readonly demo_new: (a: number, b: number, c: number, d: bigint) => [number, number, number];
    readonly demo_propagate: (a: number, b: number, c: number) => [number, number, number, number];
    readonly demo_seed_labels: (a: number) => [number, number];
    readonly demo_toggle_seed: (a: number, b: number) => void;
    readonly demo_trace: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
