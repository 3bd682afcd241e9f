/* tslint:disable */
/* eslint-disable */
export const memory: WebAssembly.Memory;
export const __wbg_explorer_free: (a: number, b: number) => void;
export const explorer_axes: (a: number) => [number, number];
export const explorer_clickMatrix: (a: number, b: number, c: number) => number;
export const explorer_clickPolar: (a: number, b: number, c: number) => number;
export const explorer_fixtureNames: () => [number, number];
export const explorer_matrixSvg: (a: number) => [number, number, number, number];
export const explorer_new: (a: number, b: number) => [number, number, number];
export const explorer_polarSvg: (a: number) => [number, number, number, number];
export const explorer_setLevel: (a: number, b: number, c: number, d: number, e: number) => [number, number];
export const explorer_setRisk: (a: number, b: number, c: number) => [number, number];
export const explorer_state: (a: number) => [number, number, number, number];
export const explorer_walk: (a: number, b: number, c: number) => [number, number, number, number];
export const __wbindgen_externrefs: WebAssembly.Table;
export const __wbindgen_free: (a: number, b: number, c: number) => void;
export const __externref_drop_slice: (a: number, b: number) => void;
export const __externref_table_dealloc: (a: number) => void;
export const __wbindgen_malloc: (a: number, b: number) => number;
export const __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
export const __wbindgen_start: () => void;
