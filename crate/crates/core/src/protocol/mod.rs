//! One-way protocols and the runtime that enforces who may query what.
//!
//! In the two-player model Alice may query subsets of her block `W_A` and
//! sends one [`Message`]; Bob may then query anything and must output a set
//! of at most `k` elements drawn from `V_B` and the message. The p-player
//! model chains the same idea: player `i` queries inside `W_1 ∪ … ∪ W_i`.

mod baseline;
mod forwarding;
mod kind;
mod repeated;
mod sieve;
mod split_greedy;

pub use baseline::BaselineHalf;
pub use forwarding::{FullForwarding, GreedyForwarding, TwoAsMulti};
pub use kind::ProtocolKind;
pub use repeated::{grouped_indices, RepeatedSolving};
pub use sieve::{run_stream, stream_to_players, SieveStream, StreamAlgorithm, StreamPlayers, StreamRun};
pub use split_greedy::{protocol3_analysis, PaddedOracle, Protocol3Analysis, SplitGreedy};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ground::Partition;
use crate::oracle::{LedgerSnapshot, ValueOracle};

/// Bytes charged per element index when reporting message sizes.
pub const BYTES_PER_ELEMENT: usize = 8;

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Message {
    pub elements: Vec<usize>,
    /// Anything that is not an element list.
    #[serde(default)]
    pub aux: Vec<u8>,
    /// Elements the protocol would have sent without deduplication.
    pub raw_len: usize,
}

impl Message {
    pub fn new(elements: Vec<usize>) -> Self {
        let raw_len = elements.len();
        Self {
            elements,
            aux: Vec::new(),
            raw_len,
        }
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty() && self.aux.is_empty()
    }

    pub fn byte_size(&self) -> usize {
        BYTES_PER_ELEMENT * self.elements.len() + self.aux.len()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub protocol: String,
    pub k: usize,
    pub messages: Vec<Message>,
    /// One ledger per player, in speaking order.
    pub ledgers: Vec<LedgerSnapshot>,
    pub solution: Vec<usize>,
    pub value: f64,
}

impl Transcript {
    /// Largest message, in elements.
    pub fn message_elements(&self) -> usize {
        self.messages.iter().map(Message::len).max().unwrap_or(0)
    }

    pub fn message_raw_elements(&self) -> usize {
        self.messages.iter().map(|m| m.raw_len).max().unwrap_or(0)
    }

    pub fn message_bytes(&self) -> usize {
        self.messages.iter().map(Message::byte_size).max().unwrap_or(0)
    }

    pub fn queries(&self) -> u64 {
        self.ledgers.iter().map(|l| l.queries).sum()
    }

    pub fn max_query_cardinality(&self) -> usize {
        self.ledgers.iter().map(|l| l.max_cardinality).max().unwrap_or(0)
    }

    /// Whether some player evaluated a set larger than `k`.
    pub fn infeasible_query(&self) -> bool {
        self.max_query_cardinality() > self.k
    }
}

pub trait TwoPlayerProtocol: Send + Sync {
    fn name(&self) -> String;

    fn alice(&self, oracle: &ValueOracle, v_a: &[usize], k: usize) -> Result<Message>;

    fn bob(&self, oracle: &ValueOracle, v_b: &[usize], message: &Message, k: usize) -> Result<Vec<usize>>;

    /// Advertised bound on the message length in elements.
    fn message_bound(&self, k: usize) -> usize;

    /// Advertised approximation ratio.
    fn guarantee(&self) -> f64;
}

impl<P: TwoPlayerProtocol + ?Sized> TwoPlayerProtocol for Box<P> {
    fn name(&self) -> String {
        (**self).name()
    }
    fn alice(&self, oracle: &ValueOracle, v_a: &[usize], k: usize) -> Result<Message> {
        (**self).alice(oracle, v_a, k)
    }
    fn bob(&self, oracle: &ValueOracle, v_b: &[usize], message: &Message, k: usize) -> Result<Vec<usize>> {
        (**self).bob(oracle, v_b, message, k)
    }
    fn message_bound(&self, k: usize) -> usize {
        (**self).message_bound(k)
    }
    fn guarantee(&self) -> f64 {
        (**self).guarantee()
    }
}

/// Which elements each player's oracle answers for.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum AccessPolicy {
    /// Alice: her block `W_A`. Bob: the whole ground set.
    #[default]
    Model,
    /// Alice: only `V_A`. Bob: only `M ∪ V_B`. Required by the robust wrapper.
    Strict,
}

fn access_error(player: usize, err: Error) -> Error {
    match err {
        Error::Domain { element } => Error::AccessViolation {
            player,
            detail: format!("queried element {element} outside its domain"),
        },
        other => other,
    }
}

fn require_subset(player: usize, what: &str, set: &[usize], allowed: &[usize]) -> Result<()> {
    match set.iter().find(|e| !allowed.contains(e)) {
        Some(e) => Err(Error::AccessViolation {
            player,
            detail: format!("{what} contains element {e} the player does not hold"),
        }),
        None => Ok(()),
    }
}

/// Output sets must also be free of repeats and within the budget.
fn require_output(player: usize, set: &[usize], allowed: &[usize], k: usize) -> Result<()> {
    require_subset(player, "output", set, allowed)?;
    let mut sorted = set.to_vec();
    sorted.sort_unstable();
    if sorted.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::AccessViolation {
            player,
            detail: "output repeats an element".into(),
        });
    }
    if set.len() > k {
        return Err(Error::AccessViolation {
            player,
            detail: format!("output has {} elements, more than k = {k}", set.len()),
        });
    }
    Ok(())
}

/// Alice's phase alone: a child-ledger oracle restricted to `domain`.
pub fn alice_phase<P: TwoPlayerProtocol + ?Sized>(
    protocol: &P,
    view: &ValueOracle,
    domain: &[usize],
    v_a: &[usize],
    k: usize,
) -> Result<(Message, LedgerSnapshot)> {
    let oracle = view.with_child_ledger().restrict(domain);
    let message = protocol.alice(&oracle, v_a, k).map_err(|e| access_error(0, e))?;
    require_subset(0, "message", &message.elements, v_a)?;
    Ok((message, oracle.ledger().snapshot()))
}

/// Bob's phase alone. The output must use only `V_B` and message elements.
pub fn bob_phase<P: TwoPlayerProtocol + ?Sized>(
    protocol: &P,
    view: &ValueOracle,
    domain: &[usize],
    v_b: &[usize],
    message: &Message,
    k: usize,
) -> Result<(Vec<usize>, LedgerSnapshot)> {
    let oracle = view.with_child_ledger().restrict(domain);
    let mut solution = protocol.bob(&oracle, v_b, message, k).map_err(|e| access_error(1, e))?;
    let mut allowed = v_b.to_vec();
    allowed.extend_from_slice(&message.elements);
    require_output(1, &solution, &allowed, k)?;
    solution.sort_unstable();
    Ok((solution, oracle.ledger().snapshot()))
}

fn union(a: &[usize], b: &[usize]) -> Vec<usize> {
    let mut out = a.to_vec();
    out.extend_from_slice(b);
    out.sort_unstable();
    out.dedup();
    out
}

/// Two-player run where Alice and Bob may see different functions (used by
/// the reductions, where Alice cannot know the hidden index).
pub fn run_two_player_views<P: TwoPlayerProtocol + ?Sized>(
    protocol: &P,
    alice_view: &ValueOracle,
    bob_view: &ValueOracle,
    partition: &Partition,
    k: usize,
    policy: AccessPolicy,
) -> Result<Transcript> {
    if partition.players() != 2 {
        return Err(Error::Precondition(format!(
            "two-player run on a partition with {} blocks",
            partition.players()
        )));
    }
    let (v_a, v_b) = (partition.private(0), partition.private(1));
    let alice_domain = match policy {
        AccessPolicy::Model => partition.block(0),
        AccessPolicy::Strict => v_a,
    };
    let (message, alice_ledger) = alice_phase(protocol, alice_view, alice_domain, v_a, k)?;
    let bob_domain = match policy {
        AccessPolicy::Model => bob_view.domain(),
        AccessPolicy::Strict => union(&message.elements, v_b),
    };
    let (solution, bob_ledger) = bob_phase(protocol, bob_view, &bob_domain, v_b, &message, k)?;
    let value = bob_view.value_unrecorded(&solution);
    Ok(Transcript {
        protocol: protocol.name(),
        k,
        messages: vec![message],
        ledgers: vec![alice_ledger, bob_ledger],
        solution,
        value,
    })
}

pub fn run_two_player<P: TwoPlayerProtocol + ?Sized>(
    protocol: &P,
    partition: &Partition,
    oracle: &ValueOracle,
    k: usize,
) -> Result<Transcript> {
    run_two_player_views(protocol, oracle, oracle, partition, k, AccessPolicy::Model)
}

/// What player `index` knows when it speaks.
pub struct PlayerView<'a> {
    pub index: usize,
    pub players: usize,
    pub k: usize,
    pub private: &'a [usize],
    pub oracle: &'a ValueOracle,
}

pub trait MultiPlayerProtocol: Send + Sync {
    fn name(&self) -> String;

    /// Message of every player but the last.
    fn send(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Message>;

    /// The last player's answer.
    fn output(&self, view: &PlayerView<'_>, incoming: Option<&Message>) -> Result<Vec<usize>>;
}

/// p-player run where player `i` queries `views[i]` inside `W_1 ∪ … ∪ W_i`.
pub fn run_p_player_views<P: MultiPlayerProtocol + ?Sized>(
    protocol: &P,
    views: &[ValueOracle],
    partition: &Partition,
    k: usize,
) -> Result<Transcript> {
    let p = partition.players();
    if p < 2 {
        return Err(Error::Precondition(format!("p-player run needs p ≥ 2, got {p}")));
    }
    if views.len() != p {
        return Err(Error::Precondition(format!("{} views for {p} players", views.len())));
    }
    let mut messages: Vec<Message> = Vec::with_capacity(p - 1);
    let mut ledgers = Vec::with_capacity(p);
    let mut solution = Vec::new();
    for i in 0..p {
        let oracle = views[i].with_child_ledger().restrict(&partition.prefix_blocks(i));
        let view = PlayerView {
            index: i,
            players: p,
            k,
            private: partition.private(i),
            oracle: &oracle,
        };
        let incoming = messages.last();
        let allowed = union(partition.private(i), incoming.map_or(&[][..], |m| &m.elements));
        if i + 1 < p {
            let m = protocol.send(&view, incoming).map_err(|e| access_error(i, e))?;
            require_subset(i, "message", &m.elements, &allowed)?;
            messages.push(m);
        } else {
            solution = protocol.output(&view, incoming).map_err(|e| access_error(i, e))?;
            require_output(i, &solution, &allowed, k)?;
            solution.sort_unstable();
        }
        ledgers.push(oracle.ledger().snapshot());
    }
    let value = views[p - 1].value_unrecorded(&solution);
    Ok(Transcript {
        protocol: protocol.name(),
        k,
        messages,
        ledgers,
        solution,
        value,
    })
}

pub fn run_p_player<P: MultiPlayerProtocol + ?Sized>(
    protocol: &P,
    partition: &Partition,
    oracle: &ValueOracle,
    k: usize,
) -> Result<Transcript> {
    let views = vec![oracle.clone(); partition.players()];
    run_p_player_views(protocol, &views, partition, k)
}
