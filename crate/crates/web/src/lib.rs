//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes and returns strings: permutations in the one-line
//! format in, JSON out. The `*_json` functions hold the logic and are what
//! the native tests exercise; the exported wrappers only convert errors.

use ppm_core::generators::{gen_grid, gen_jordan, gen_random, GridParams};
use ppm_core::{
    incidence_graph, is_planar, match_dp, match_even_odd, match_naive, MatchResult, Permutation,
    Strategy,
};
use serde::Serialize;
use wasm_bindgen::prelude::*;

/// Longest pattern the page accepts; keeps the DP table and the drawing sane.
pub const MAX_PATTERN: usize = 64;
/// Longest text the page accepts.
pub const MAX_TEXT: usize = 400;

fn parse(line: &str, what: &str, max: usize) -> Result<Permutation, String> {
    let p = Permutation::parse(line).map_err(|e| format!("{what}: {e}"))?;
    if p.len() > max {
        return Err(format!("{what}: length {} exceeds the demo limit of {max}", p.len()));
    }
    Ok(p)
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct GraphView {
    values: Vec<u32>,
    /// Pairs of 1-based indices, consecutive in position.
    index_path: Vec<(usize, usize)>,
    /// Pairs of 1-based indices, consecutive in value.
    value_path: Vec<(usize, usize)>,
    planar: bool,
}

/// Points and the two Hamiltonian paths of the incidence graph.
pub fn incidence_json(perm: &str) -> Result<String, String> {
    let p = parse(perm, "permutation", MAX_TEXT)?;
    let g = incidence_graph(&p);
    let one_based = |e: Vec<(usize, usize)>| e.into_iter().map(|(a, b)| (a + 1, b + 1)).collect();
    to_json(&GraphView {
        values: p.values().to_vec(),
        index_path: one_based(g.index_path()),
        value_path: one_based(g.value_path()),
        planar: is_planar(&g),
    })
}

#[derive(Serialize)]
struct OrderView<'a> {
    strategy: &'a str,
    tau: &'a [usize],
    profile: &'a [usize],
    bd_tau: usize,
}

/// An embedding order with its boundary profile.
pub fn order_json(pattern: &str, strategy: &str) -> Result<String, String> {
    let p = parse(pattern, "pattern", MAX_PATTERN)?;
    let st: Strategy = strategy.parse().map_err(|e: ppm_core::Error| e.to_string())?;
    let o = st.build(&p).map_err(|e| e.to_string())?;
    to_json(&OrderView {
        strategy: st.name(),
        tau: o.tau(),
        profile: o.profile(),
        bd_tau: o.bd_tau(),
    })
}

#[derive(Serialize)]
struct MatchView {
    algo: String,
    contains: bool,
    witness: Option<Vec<usize>>,
    pattern_longer: bool,
    candidates: u64,
    peak_width: u64,
    widths: Vec<u64>,
}

/// Decides containment; `algo` is `naive`, `even-odd` or `dp:<strategy>`.
pub fn match_json(text: &str, pattern: &str, algo: &str) -> Result<String, String> {
    let t = parse(text, "text", MAX_TEXT)?;
    let p = parse(pattern, "pattern", MAX_PATTERN)?;
    let r: MatchResult = match algo {
        "naive" => match_naive(&t, &p),
        "even-odd" => match_even_odd(&t, &p),
        _ => {
            let st = algo
                .strip_prefix("dp:")
                .ok_or_else(|| format!("unknown algorithm `{algo}`"))?;
            let st: Strategy = st.parse().map_err(|e: ppm_core::Error| e.to_string())?;
            let order = st.build(&p).map_err(|e| e.to_string())?;
            match_dp(&t, &p, &order, true)
        }
    };
    to_json(&MatchView {
        algo: algo.to_string(),
        contains: r.contains,
        witness: r.witness,
        pattern_longer: r.pattern_longer,
        candidates: r.stats.candidates,
        peak_width: r.stats.peak_width,
        widths: r.stats.widths,
    })
}

/// One-line permutation from a generator family. `a` is the length for
/// `random` and `jordan`, the grid width for `grid`; `b` is the grid height.
pub fn generate_line(family: &str, a: usize, b: usize, seed: u64) -> Result<String, String> {
    let p = match family {
        "random" if a <= MAX_TEXT => gen_random(a, seed),
        "random" => return Err(format!("length {a} exceeds the demo limit of {MAX_TEXT}")),
        "grid" if a * b <= MAX_TEXT => gen_grid(GridParams::new(a, b).map_err(|e| e.to_string())?),
        "grid" => return Err(format!("a·b = {} exceeds the demo limit of {MAX_TEXT}", a * b)),
        "jordan" if a <= MAX_TEXT => gen_jordan(a, seed).map_err(|e| e.to_string())?,
        "jordan" => return Err(format!("length {a} exceeds the demo limit of {MAX_TEXT}")),
        _ => return Err(format!("unknown family `{family}`")),
    };
    Ok(p.to_string())
}

fn js(r: Result<String, String>) -> Result<String, JsError> {
    r.map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn incidence(perm: &str) -> Result<String, JsError> {
    js(incidence_json(perm))
}

#[wasm_bindgen]
pub fn order(pattern: &str, strategy: &str) -> Result<String, JsError> {
    js(order_json(pattern, strategy))
}

#[wasm_bindgen(js_name = matchPattern)]
pub fn match_pattern(text: &str, pattern: &str, algo: &str) -> Result<String, JsError> {
    js(match_json(text, pattern, algo))
}

#[wasm_bindgen]
pub fn generate(family: &str, a: usize, b: usize, seed: u64) -> Result<String, JsError> {
    js(generate_line(family, a, b, seed))
}
