//! WebAssembly bindings for the static demo page in `www/`.
//!
//! Every export takes a snapshot as JSON text and returns JSON text, so the
//! page never needs to know the Rust types. The `*_json` functions hold the
//! logic and are plain Rust, which keeps them testable off the browser.

use lensnet_core::centrality::{self, CentralityOptions, Measure};
use lensnet_core::json::to_pretty;
use lensnet_core::report::{self, Limits};
use lensnet_core::snapshot::Snapshot;
use lensnet_core::{parse_id_list, PartitionQuery, SeedQuery, SignedGraph};
use wasm_bindgen::prelude::*;

fn load(snapshot: &str) -> lensnet_core::Result<(SignedGraph, Option<String>)> {
    let snap = Snapshot::from_json(snapshot)?;
    let dynasty = snap.dynasty.clone();
    Ok((snap.into_graph()?, dynasty))
}

fn err(e: lensnet_core::Error) -> String {
    serde_json::json!({ "error": e.kind(), "message": e.to_string() }).to_string()
}

/// Seed neighbourhood as a snapshot.
pub fn extract_json(snapshot: &str, seeds: &str, depth: usize) -> Result<String, String> {
    let (g, dynasty) = load(snapshot).map_err(err)?;
    let sq = SeedQuery::new(parse_id_list(seeds).map_err(err)?, depth).map_err(err)?;
    let (sub, _) = report::guarded_subgraph(&g, &sq, &Limits::default()).map_err(err)?;
    Ok(Snapshot::from_graph(&sub, dynasty.as_deref()).to_json())
}

/// Top `top` people by `order_by`.
pub fn centrality_json(snapshot: &str, top: usize, order_by: &str) -> Result<String, String> {
    let (g, _) = load(snapshot).map_err(err)?;
    let measure: Measure = order_by.parse().map_err(err)?;
    let report = centrality::centrality_report(&g, &CentralityOptions::default());
    Ok(to_pretty(&centrality::top_central(&report, top, measure).map_err(err)?))
}

/// `query` is a partition request, e.g. `{"algorithm":"greedy","groups":2,"seed":1}`.
pub fn partition_json(snapshot: &str, query: &str) -> Result<String, String> {
    let (g, _) = load(snapshot).map_err(err)?;
    let q: PartitionQuery = serde_json::from_str(query).map_err(|e| err(e.into()))?;
    Ok(to_pretty(&report::partition_query(&g, &q, &Limits::default()).map_err(err)?))
}

#[wasm_bindgen]
pub fn extract(snapshot: &str, seeds: &str, depth: usize) -> Result<String, JsValue> {
    extract_json(snapshot, seeds, depth).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn centrality(snapshot: &str, top: usize, order_by: &str) -> Result<String, JsValue> {
    centrality_json(snapshot, top, order_by).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn partition(snapshot: &str, query: &str) -> Result<String, JsValue> {
    partition_json(snapshot, query).map_err(|e| JsValue::from_str(&e))
}

#[cfg(test)]
mod tests {
    use super::*;
    use lensnet_core::fixture;

    fn snapshot() -> String {
        let (g, _) = fixture::song_graph().unwrap();
        Snapshot::from_graph(&g, Some("Song")).to_json()
    }

    #[test]
    fn extract_returns_a_snapshot() {
        let out = extract_json(&snapshot(), "20003", 1).unwrap();
        let sub = Snapshot::from_json(&out).unwrap().into_graph().unwrap();
        assert_eq!(sub.node_count(), 4);
    }

    #[test]
    fn centrality_rows_are_ranked() {
        let out: serde_json::Value = serde_json::from_str(&centrality_json(&snapshot(), 3, "betweenness").unwrap()).unwrap();
        let rows = out.as_array().unwrap();
        assert_eq!(rows.len(), 3);
        assert_eq!(rows[0]["name_en"], "Wang Anshi");
    }

    #[test]
    fn partition_splits_the_masters() {
        let q = r#"{"seeds":[1384,1762,3767,20001,20002,20003],"algorithm":"community"}"#;
        let out: serde_json::Value = serde_json::from_str(&partition_json(&snapshot(), q).unwrap()).unwrap();
        assert_eq!(out["l"], 2);
        assert_eq!(out["assignment"]["3767"], out["assignment"]["20002"]);
        assert_ne!(out["assignment"]["3767"], out["assignment"]["1762"]);
    }

    #[test]
    fn errors_are_json() {
        let e = partition_json(&snapshot(), r#"{"algorithm":"greedy"}"#).unwrap_err();
        let v: serde_json::Value = serde_json::from_str(&e).unwrap();
        assert_eq!(v["error"], "json");
        let e = extract_json(&snapshot(), "1", 1).unwrap_err();
        assert!(e.contains("not_found"));
        assert!(centrality_json("{", 3, "degree").is_err());
    }
}
