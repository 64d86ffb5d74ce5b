/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_detector_free: (a: number, b: number) => void;
export const detector_classify: (a: number, b: number, c: number) => [number, number];
export const detector_new: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
export const detector_summary: (a: number) => [number, number];
export const inspectFeatures: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
export const preprocessText: (a: number, b: number) => [number, number];
export const presets: () => [number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_start: () => void;
