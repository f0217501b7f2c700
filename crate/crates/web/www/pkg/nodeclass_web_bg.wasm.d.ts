/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_demo_free: (a: number, b: number) => void;
export const demo_coordinates: (a: number) => [number, number];
export const demo_edge_list: (a: number) => [number, number];
export const demo_is_empty: (a: number) => number;
export const demo_len: (a: number) => number;
export const demo_monte_carlo_gap: (a: number, b: number, c: bigint) => [number, number, number];
export const demo_nearest: (a: number, b: number, c: number) => number;
export const demo_new: (a: number, b: number, c: number, d: bigint) => [number, number, number];
export const demo_propagate: (a: number, b: number, c: number) => [number, number, number, number];
export const demo_seed_labels: (a: number) => [number, number];
export const demo_toggle_seed: (a: number, b: number) => void;
export const demo_trace: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
