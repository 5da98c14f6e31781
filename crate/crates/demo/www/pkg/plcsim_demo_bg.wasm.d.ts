/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const capacity_curve: (a: number, b: number) => [number, number, number, number];
export const density_sweep: (a: number, b: bigint) => [number, number, number, number];
export const deployment: (a: number, b: bigint) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
