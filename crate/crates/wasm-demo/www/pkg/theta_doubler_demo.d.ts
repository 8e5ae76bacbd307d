/* tslint:disable */
/* eslint-disable */

/**
 * Primes ℓ ≡ 1 mod p split completely in the ring class field of Q(√d).
 */
export function auxiliary_primes(p: number, d: number, limit: number, count: number): string;

/**
 * Count identity, doubled submodule and pairing for the dihedral form of
 * discriminant `d` at level |d|, weight p.
 */
export function doubling(d: number, p: number): string;

/**
 * q-expansion of the weight-one newform of discriminant `d`, with
 * coefficients written as polynomials in ζ_h.
 */
export function theta_form(d: number, prec: number): string;

export type InitInput = RequestInfo | URL | Response | BufferSource | WebAssembly.Module;

export interface InitOutput {
    readonly memory: WebAssembly.Memory;
    readonly auxiliary_primes: (a: number, b: number, c: number, d: number) => [number, number, number, number];
    readonly doubling: (a: number, b: number) => [number, number, number, number];
    readonly theta_form: (a: number, b: number) => [number, number, number, number];
    readonly __wbindgen_externrefs: WebAssembly.Table;
    readonly __externref_table_dealloc: (a: number) => void;
    readonly __wbindgen_free: (a: number, b: number, c: number) => void;
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
