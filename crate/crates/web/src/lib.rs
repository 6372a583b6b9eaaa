//! WebAssembly bindings for the browser demo in `www/`.
//!
//! Three interactive operations are exported:
//!
//! * a live dictionary ([`Demo`]): add and remove patterns, search a text
//!   with a chosen engine and get matches plus counters;
//! * [`explain_row`]: period, least rotation and canonical form of a row;
//! * [`classify_pattern`]: group, LCM table and verification path of a
//!   pattern.
//!
//! Results are returned as JSON strings.

pub mod demo;

use serde::Serialize;
use wasm_bindgen::prelude::*;

fn to_js<T: Serialize>(v: &Result<T, dict2d::Error>) -> Result<String, JsError> {
    match v {
        Ok(v) => serde_json::to_string(v).map_err(|e| JsError::new(&e.to_string())),
        Err(e) => Err(JsError::new(&e.to_string())),
    }
}

#[wasm_bindgen]
pub struct Demo {
    state: demo::DemoState,
}

#[wasm_bindgen]
impl Demo {
    #[wasm_bindgen(constructor)]
    pub fn new() -> Demo {
        Demo {
            state: demo::DemoState::new(),
        }
    }

    /// Adds a pattern typed as newline-separated rows; returns its id.
    pub fn add(&mut self, grid: &str) -> Result<u64, JsError> {
        self.state
            .add(grid)
            .map_err(|e| JsError::new(&e.to_string()))
    }

    pub fn remove(&mut self, id: u64) -> Result<(), JsError> {
        self.state
            .remove(id)
            .map_err(|e| JsError::new(&e.to_string()))
    }

    /// JSON list of `{id, rows, group}`.
    pub fn patterns(&self) -> Result<String, JsError> {
        to_js(&Ok(self.state.patterns()))
    }

    /// JSON search report for `engine` (auto, linear, blocked, grouped).
    pub fn search(&self, text: &str, engine: &str) -> Result<String, JsError> {
        to_js(&self.state.search(text, engine))
    }
}

impl Default for Demo {
    fn default() -> Self {
        Self::new()
    }
}

#[wasm_bindgen]
pub fn explain_row(row: &str) -> Result<String, JsError> {
    to_js(&demo::explain_row(row))
}

#[wasm_bindgen]
pub fn classify_pattern(grid: &str) -> Result<String, JsError> {
    to_js(&demo::classify(grid))
}
