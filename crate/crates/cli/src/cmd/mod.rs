pub mod gen;
pub mod reduce;
pub mod robust;
pub mod run;
pub mod verify;

use maxcard_core::protocol::ProtocolKind;

/// Accepts `p1`, `p3`, `half`, and `p1g` / `sieve` with the shared `eps`.
pub fn parse_protocols(names: &[String], eps: Option<f64>) -> anyhow::Result<Vec<ProtocolKind>> {
    names
        .iter()
        .flat_map(|n| n.split(','))
        .filter(|n| !n.is_empty())
        .map(|n| ProtocolKind::from_name(n.trim(), eps).map_err(Into::into))
        .collect()
}
