/* tslint:disable */
/* eslint-disable */

/**
 * The demo page's handle on a [`Session`].
 */
export class Explorer {
    free(): void;
    [Symbol.dispose](): void;
    axes(): string;
    clickMatrix(x: number, y: number): boolean;
    /**
     * True when the click changed the state.
     */
    clickPolar(x: number, y: number): boolean;
    static fixtureNames(): string[];
    matrixSvg(): string;
    constructor(source: string);
    polarSvg(): string;
    setLevel(axis: string, level: string): void;
    setRisk(likelihood: number, impact: number): void;
    state(): string;
    walk(axis: string): string;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_explorer_free: (a: number, b: number) => void;
    readonly explorer_axes: (a: number) => [number, number];
    readonly explorer_clickMatrix: (a: number, b: number, c: number) => number;
    readonly explorer_clickPolar: (a: number, b: number, c: number) => number;
    readonly explorer_fixtureNames: () => [number, number];
    readonly explorer_matrixSvg: (a: number) => [number, number, number, number];
    readonly explorer_new: (a: number, b: number) => [number, number, number];
    readonly explorer_polarSvg: (a: number) => [number, number, number, number];
    readonly explorer_setLevel: (a: number, b: number, c: number, d: number, e: number) => [number, number];
    readonly explorer_setRisk: (a: number, b: number, c: number) => [number, number];
    readonly explorer_state: (a: number) => [number, number, number, number];
    readonly explorer_walk: (a: number, b: number, c: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_drop_slice: (a: number, b: number) => void;
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
