/* tslint:disable */
/* eslint-disable */

/**
 * A detector fitted in the page on a generated corpus.
 */
export class Detector {
    free(): void;
    [Symbol.dispose](): void;
    classify(text: string): string;
    /**
     * Generates a corpus, holds out a quarter, fits the preset and scores it.
     */
    constructor(preset_name: string, n_docs: number, separation: number, seed: bigint);
    summary(): string;
}

export function inspectFeatures(text: string, corpus: string, nmin: number, nmax: number): string;

export function preprocessText(text: string): string;

export function presets(): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_detector_free: (a: number, b: number) => void;
    readonly detector_classify: (a: number, b: number, c: number) => [number, number];
    readonly detector_new: (a: number, b: number, c: number, d: number, e: bigint) => [number, number, number];
    readonly detector_summary: (a: number) => [number, number];
    readonly inspectFeatures: (a: number, b: number, c: number, d: number, e: number, f: number) => [number, number, number, number];
    readonly preprocessText: (a: number, b: number) => [number, number];
    readonly presets: () => [number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __wbindgen_realloc: (a: number, b: number, c: number, d: number) => number;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
    readonly __externref_table_dealloc: (a: number) => void;
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
