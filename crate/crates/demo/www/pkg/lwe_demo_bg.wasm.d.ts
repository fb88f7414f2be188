/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const dgauss_histogram: (a: number, b: number, c: number, d: bigint) => [number, number, number, number];
export const lattice_scatter: (a: number, b: number, c: number, d: number, e: number, f: number, g: number, h: number, i: bigint) => [number, number, number, number];
export const mod_switch_residuals: (a: number, b: number, c: number, d: number, e: number, f: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
