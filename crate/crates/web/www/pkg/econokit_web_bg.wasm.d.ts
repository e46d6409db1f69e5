/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const acf_explorer: (a: number, b: number, c: number, d: number) => [number, number, number, number];
export const fan_chart: (a: number, b: number, c: number) => [number, number, number, number];
export const qlr_scan: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __wbindgen_start: () => void;
