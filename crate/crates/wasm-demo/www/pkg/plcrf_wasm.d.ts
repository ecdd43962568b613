/* tslint:disable */
/* eslint-disable */

/**
 * Link parameters shared by both hops; SNR-like values in dB.
 */
export class Link {
    free(): void;
    [Symbol.dispose](): void;
    /**
     * Density of the amplify-and-forward end-to-end SNR at the points `gamma`
     * (linear), for mean SNR `gamma_bar_db`.
     */
    afDensity(gamma_bar_db: number, gamma: Float64Array): Float64Array;
    /**
     * Average BER (DBPSK) at each mean SNR in `gamma_bar_db`.
     */
    ber(protocol: string, gamma_bar_db: Float64Array): Float64Array;
    constructor(k_db: number, p_i: number, eta: number, c: number, gamma_th_db: number);
    /**
     * Outage probability at each mean SNR in `gamma_bar_db`.
     */
    outage(protocol: string, gamma_bar_db: Float64Array): Float64Array;
}

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly __wbg_link_free: (a: number, b: number) => void;
    readonly link_afDensity: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly link_ber: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly link_new: (a: number, b: number, c: number, d: number, e: number) => number;
    readonly link_outage: (a: number, b: number, c: number, d: number, e: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __wbindgen_malloc: (a: number, b: number) => number;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
