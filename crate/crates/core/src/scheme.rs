//! Assignment of check-matrix row bands to nodes.
//!
//! Only the first k rows of the transposed parity check (the data positions)
//! can be owned. The disjoint discipline tiles them across up to k nodes and
//! rebuilds on every membership change; the flexible discipline keeps exactly
//! two complementary bands shared by two groups, so joins cost one
//! configuration message and leaves cost none.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::code::LinearBlockCode;
use crate::error::Error;
use crate::Result;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub u16);

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Group {
    One,
    Two,
}

impl Group {
    pub fn other(self) -> Group {
        match self {
            Group::One => Group::Two,
            Group::Two => Group::One,
        }
    }
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::One => "1",
            Group::Two => "2",
        })
    }
}

/// Identifies which scheme discipline framed a payload.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SchemeKind {
    Disjoint,
    Flexible,
}

impl SchemeKind {
    pub fn tag(self) -> u8 {
        match self {
            SchemeKind::Disjoint => 0,
            SchemeKind::Flexible => 1,
        }
    }

    pub fn from_tag(tag: u8) -> Result<Self> {
        match tag {
            0 => Ok(SchemeKind::Disjoint),
            1 => Ok(SchemeKind::Flexible),
            other => Err(Error::BadSchemeTag(other)),
        }
    }
}

/// One node's view of the row split: it keeps `u` data bits, owns the band of
/// `a` rows starting right after them, and keeps the remaining `v` data bits.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct NodePartition {
    pub node_id: NodeId,
    pub u: usize,
    pub a: usize,
    pub v: usize,
}

impl NodePartition {
    pub fn new(node_id: NodeId, u: usize, a: usize, v: usize) -> Self {
        NodePartition { node_id, u, a, v }
    }

    /// Owned rows as a 0-based range into the data rows.
    pub fn band(&self) -> core::ops::Range<usize> {
        self.u..self.u + self.a
    }

    pub fn data_len(&self) -> usize {
        self.u + self.a + self.v
    }

    /// Checks the split covers exactly the code's data rows.
    pub fn fits(&self, code: &LinearBlockCode) -> Result<()> {
        if self.data_len() != code.k() {
            return Err(Error::Invalid("partition does not sum to the data length"));
        }
        Ok(())
    }

    pub fn overlaps(&self, other: &NodePartition) -> bool {
        self.a != 0 && other.a != 0 && self.u < other.u + other.a && other.u < self.u + self.a
    }
}

/// A violated structural rule of a disjoint scheme.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SchemeViolation {
    PartitionSum { node: NodeId, got: usize, expected: usize },
    ZeroBand { node: NodeId },
    OutsideDataRows { node: NodeId },
    Overlap { prev: NodeId, node: NodeId },
    Gap { at_row: usize },
    TooManyNodes { nodes: usize, bands: usize },
    DuplicateNode(NodeId),
}

impl fmt::Display for SchemeViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SchemeViolation::PartitionSum { node, got, expected } => {
                write!(f, "node {node}: u+a+v = {got}, expected {expected}")
            }
            SchemeViolation::ZeroBand { node } => write!(f, "node {node}: owns no rows"),
            SchemeViolation::OutsideDataRows { node } => {
                write!(f, "node {node}: band reaches past the data rows")
            }
            SchemeViolation::Overlap { prev, node } => {
                write!(f, "bands of nodes {prev} and {node} overlap")
            }
            SchemeViolation::Gap { at_row } => write!(f, "row {at_row} is owned by no node"),
            SchemeViolation::TooManyNodes { nodes, bands } => {
                write!(f, "{nodes} nodes but only {bands} assignable rows")
            }
            SchemeViolation::DuplicateNode(id) => write!(f, "node {id} appears twice"),
        }
    }
}

/// What happened on a membership change.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChurnAction {
    Join,
    Leave,
}

impl fmt::Display for ChurnAction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ChurnAction::Join => "join",
            ChurnAction::Leave => "leave",
        })
    }
}

/// Record of one membership change: which nodes had to be sent a fresh
/// configuration, and whether the whole scheme was redetermined.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ManagementEvent {
    pub action: ChurnAction,
    pub node: NodeId,
    pub rebuild: bool,
    pub reconfigured: Vec<NodeId>,
}

impl ManagementEvent {
    pub fn messages(&self) -> u64 {
        self.reconfigured.len() as u64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ManagementLog {
    pub events: Vec<ManagementEvent>,
}

impl ManagementLog {
    pub fn push(&mut self, event: ManagementEvent) {
        self.events.push(event);
    }

    pub fn total_messages(&self) -> u64 {
        self.events.iter().map(ManagementEvent::messages).sum()
    }
}

/// Disjoint scheme: bands tile the data rows exactly, one per node, in node
/// order. Built valid; arbitrary partition lists can be wrapped with
/// [`DgScheme::from_partitions`] and checked with [`DgScheme::validate`].
#[derive(Clone, Debug, PartialEq)]
pub struct DgScheme {
    code: LinearBlockCode,
    partitions: Vec<NodePartition>,
}

impl DgScheme {
    /// Balanced split over nodes 0..node_count: every node gets
    /// floor(k / N) rows and the remainder goes to the lowest-index nodes.
    pub fn balanced(code: LinearBlockCode, node_count: usize) -> Result<Self> {
        let ids: Vec<NodeId> = (0..node_count)
            .map(|i| {
                u16::try_from(i)
                    .map(NodeId)
                    .map_err(|_| Error::Invalid("node count exceeds the id space"))
            })
            .collect::<Result<_>>()?;
        Self::with_ids(code, &ids)
    }

    /// Balanced split over the given nodes, band order following list order.
    pub fn with_ids(code: LinearBlockCode, ids: &[NodeId]) -> Result<Self> {
        let n_nodes = ids.len();
        let k = code.k();
        if n_nodes == 0 {
            return Err(Error::Invalid("a scheme needs at least one node"));
        }
        if n_nodes > k {
            return Err(Error::CapacityExceeded {
                nodes: n_nodes,
                max_nodes: k,
            });
        }
        let mut seen = ids.to_vec();
        seen.sort_unstable();
        if let Some(w) = seen.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateNode(w[0]));
        }
        let base = k / n_nodes;
        let extra = k % n_nodes;
        let mut partitions = Vec::with_capacity(n_nodes);
        let mut cursor = 0usize;
        for (i, &id) in ids.iter().enumerate() {
            let a = base + usize::from(i < extra);
            partitions.push(NodePartition::new(id, cursor, a, k - cursor - a));
            cursor += a;
        }
        Ok(DgScheme { code, partitions })
    }

    /// Wraps partitions as-is; call [`DgScheme::validate`] to find out
    /// whether the result is decodable.
    pub fn from_partitions(code: LinearBlockCode, partitions: Vec<NodePartition>) -> Self {
        DgScheme { code, partitions }
    }

    /// Reports every violated structural rule (empty means valid).
    pub fn validate(&self) -> Vec<SchemeViolation> {
        let k = self.code.k();
        let mut out = Vec::new();
        if self.partitions.len() > k {
            out.push(SchemeViolation::TooManyNodes {
                nodes: self.partitions.len(),
                bands: k,
            });
        }
        let mut ids: Vec<NodeId> = self.partitions.iter().map(|p| p.node_id).collect();
        ids.sort_unstable();
        for w in ids.windows(2) {
            if w[0] == w[1] {
                out.push(SchemeViolation::DuplicateNode(w[0]));
            }
        }
        for p in &self.partitions {
            if p.data_len() != k {
                out.push(SchemeViolation::PartitionSum {
                    node: p.node_id,
                    got: p.data_len(),
                    expected: k,
                });
            }
            if p.a == 0 {
                out.push(SchemeViolation::ZeroBand { node: p.node_id });
            }
            if p.u + p.a > k {
                out.push(SchemeViolation::OutsideDataRows { node: p.node_id });
            }
        }
        let mut cursor = 0usize;
        let mut prev: Option<NodeId> = None;
        for p in &self.partitions {
            if p.u < cursor {
                out.push(SchemeViolation::Overlap {
                    prev: prev.unwrap_or(p.node_id),
                    node: p.node_id,
                });
            } else if p.u > cursor {
                out.push(SchemeViolation::Gap { at_row: cursor });
            }
            cursor = cursor.max(p.u + p.a);
            prev = Some(p.node_id);
        }
        if cursor < k {
            out.push(SchemeViolation::Gap { at_row: cursor });
        }
        out
    }

    pub fn code(&self) -> &LinearBlockCode {
        &self.code
    }

    pub fn partitions(&self) -> &[NodePartition] {
        &self.partitions
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.partitions.iter().map(|p| p.node_id).collect()
    }

    pub fn partition_of(&self, id: NodeId) -> Option<&NodePartition> {
        self.partitions.iter().find(|p| p.node_id == id)
    }

    pub fn len(&self) -> usize {
        self.partitions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.partitions.is_empty()
    }

    /// Rebuilds with the node added; every node of the new scheme gets a
    /// configuration message.
    pub fn join(&self, id: NodeId) -> Result<(Self, ManagementEvent)> {
        if self.partition_of(id).is_some() {
            return Err(Error::DuplicateNode(id));
        }
        let mut ids = self.node_ids();
        ids.push(id);
        let next = Self::with_ids(self.code.clone(), &ids)?;
        let event = ManagementEvent {
            action: ChurnAction::Join,
            node: id,
            rebuild: true,
            reconfigured: next.node_ids(),
        };
        Ok((next, event))
    }

    /// Rebuilds with the node removed; every remaining node gets a
    /// configuration message.
    pub fn leave(&self, id: NodeId) -> Result<(Self, ManagementEvent)> {
        if self.partition_of(id).is_none() {
            return Err(Error::UnknownNode(id));
        }
        if self.len() == 1 {
            return Err(Error::Invalid("cannot remove the last node"));
        }
        let ids: Vec<NodeId> = self.node_ids().into_iter().filter(|&x| x != id).collect();
        let next = Self::with_ids(self.code.clone(), &ids)?;
        let event = ManagementEvent {
            action: ChurnAction::Leave,
            node: id,
            rebuild: true,
            reconfigured: next.node_ids(),
        };
        Ok((next, event))
    }
}

/// Flexible scheme: group 1 owns the first `r_g1` data rows, group 2 the
/// rest. Decoding pairs nodes across groups, so membership can change
/// without touching anyone else's assignment.
#[derive(Clone, Debug, PartialEq)]
pub struct FgScheme {
    code: LinearBlockCode,
    r_g1: usize,
    split_ratio: f64,
    members: Vec<(NodeId, Group)>, // sorted by id
}

impl FgScheme {
    /// Splits nodes 0..node_count by the target ratio: round(ratio * N)
    /// nodes to group 1, at least one per group, lowest indexes first.
    pub fn split(
        code: LinearBlockCode,
        node_count: usize,
        split_ratio: f64,
        r_g1: usize,
    ) -> Result<Self> {
        if node_count < 2 {
            return Err(Error::Invalid("a flexible scheme needs at least two nodes"));
        }
        if !(split_ratio > 0.0 && split_ratio < 1.0) {
            return Err(Error::Invalid("split ratio must be strictly between 0 and 1"));
        }
        let n_g1 = (round_nonneg(split_ratio * node_count as f64) as usize)
            .clamp(1, node_count - 1);
        let members = (0..node_count)
            .map(|i| {
                let id = u16::try_from(i)
                    .map(NodeId)
                    .map_err(|_| Error::Invalid("node count exceeds the id space"))?;
                Ok((id, if i < n_g1 { Group::One } else { Group::Two }))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_members(code, members, r_g1, split_ratio)
    }

    /// Explicit group sizes; the join target ratio defaults to the realized
    /// fraction.
    pub fn with_sizes(
        code: LinearBlockCode,
        n_g1: usize,
        n_g2: usize,
        r_g1: usize,
    ) -> Result<Self> {
        if n_g1 == 0 || n_g2 == 0 {
            return Err(Error::Invalid("each group needs at least one node"));
        }
        let total = n_g1 + n_g2;
        let members = (0..total)
            .map(|i| {
                let id = u16::try_from(i)
                    .map(NodeId)
                    .map_err(|_| Error::Invalid("node count exceeds the id space"))?;
                Ok((id, if i < n_g1 { Group::One } else { Group::Two }))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::with_members(code, members, r_g1, n_g1 as f64 / total as f64)
    }

    /// General constructor from an explicit membership list.
    pub fn with_members(
        code: LinearBlockCode,
        mut members: Vec<(NodeId, Group)>,
        r_g1: usize,
        split_ratio: f64,
    ) -> Result<Self> {
        if r_g1 > code.k() {
            return Err(Error::Invalid("group 1 cannot own more rows than exist"));
        }
        if !(split_ratio > 0.0 && split_ratio < 1.0) {
            return Err(Error::Invalid("split ratio must be strictly between 0 and 1"));
        }
        members.sort_by_key(|&(id, _)| id);
        if let Some(w) = members.windows(2).find(|w| w[0].0 == w[1].0) {
            return Err(Error::DuplicateNode(w[0].0));
        }
        let scheme = FgScheme {
            code,
            r_g1,
            split_ratio,
            members,
        };
        for group in [Group::One, Group::Two] {
            if scheme.group_size(group) == 0 {
                return Err(Error::GroupEmptied { group });
            }
        }
        Ok(scheme)
    }

    pub fn code(&self) -> &LinearBlockCode {
        &self.code
    }

    pub fn r_g1(&self) -> usize {
        self.r_g1
    }

    pub fn r_g2(&self) -> usize {
        self.code.k() - self.r_g1
    }

    pub fn split_ratio(&self) -> f64 {
        self.split_ratio
    }

    pub fn members(&self) -> &[(NodeId, Group)] {
        &self.members
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        self.members.iter().map(|&(id, _)| id).collect()
    }

    pub fn group_of(&self, id: NodeId) -> Option<Group> {
        self.members
            .iter()
            .find(|&&(m, _)| m == id)
            .map(|&(_, g)| g)
    }

    pub fn group_members(&self, group: Group) -> Vec<NodeId> {
        self.members
            .iter()
            .filter(|&&(_, g)| g == group)
            .map(|&(id, _)| id)
            .collect()
    }

    pub fn group_size(&self, group: Group) -> usize {
        self.members.iter().filter(|&&(_, g)| g == group).count()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Band of the given group: group 1 owns rows [0, r_g1), group 2 the
    /// remaining data rows.
    pub fn partition_for(&self, id: NodeId, group: Group) -> NodePartition {
        let k = self.code.k();
        match group {
            Group::One => NodePartition::new(id, 0, self.r_g1, k - self.r_g1),
            Group::Two => NodePartition::new(id, self.r_g1, k - self.r_g1, 0),
        }
    }

    pub fn partition_of(&self, id: NodeId) -> Option<NodePartition> {
        self.group_of(id).map(|g| self.partition_for(id, g))
    }

    /// Adds the node to whichever group sits furthest below its target share
    /// (ties go to group 1). Exactly one configuration message: the joiner's.
    pub fn join(&self, id: NodeId) -> Result<(Self, ManagementEvent)> {
        if self.group_of(id).is_some() {
            return Err(Error::DuplicateNode(id));
        }
        let total = self.len() as f64;
        let deficit_1 = self.split_ratio * total - self.group_size(Group::One) as f64;
        let deficit_2 = (1.0 - self.split_ratio) * total - self.group_size(Group::Two) as f64;
        let group = if deficit_1 >= deficit_2 {
            Group::One
        } else {
            Group::Two
        };
        let mut members = self.members.clone();
        members.push((id, group));
        let next = Self::with_members(self.code.clone(), members, self.r_g1, self.split_ratio)?;
        let event = ManagementEvent {
            action: ChurnAction::Join,
            node: id,
            rebuild: false,
            reconfigured: vec![id],
        };
        Ok((next, event))
    }

    /// Removes the node; nobody else is touched, so zero messages.
    pub fn leave(&self, id: NodeId) -> Result<(Self, ManagementEvent)> {
        let group = self.group_of(id).ok_or(Error::UnknownNode(id))?;
        if self.group_size(group) == 1 {
            return Err(Error::GroupEmptied { group });
        }
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&(m, _)| m != id)
            .collect();
        let next = Self::with_members(self.code.clone(), members, self.r_g1, self.split_ratio)?;
        let event = ManagementEvent {
            action: ChurnAction::Leave,
            node: id,
            rebuild: false,
            reconfigured: Vec::new(),
        };
        Ok((next, event))
    }
}

fn round_nonneg(x: f64) -> u64 {
    (x + 0.5) as u64
}

/// Either scheme discipline, for code paths that work with both.
#[derive(Clone, Debug, PartialEq)]
pub enum Scheme {
    Dg(DgScheme),
    Fg(FgScheme),
}

impl Scheme {
    pub fn kind(&self) -> SchemeKind {
        match self {
            Scheme::Dg(_) => SchemeKind::Disjoint,
            Scheme::Fg(_) => SchemeKind::Flexible,
        }
    }

    pub fn code(&self) -> &LinearBlockCode {
        match self {
            Scheme::Dg(s) => s.code(),
            Scheme::Fg(s) => s.code(),
        }
    }

    pub fn node_ids(&self) -> Vec<NodeId> {
        match self {
            Scheme::Dg(s) => s.node_ids(),
            Scheme::Fg(s) => s.node_ids(),
        }
    }

    pub fn partition_of(&self, id: NodeId) -> Option<NodePartition> {
        match self {
            Scheme::Dg(s) => s.partition_of(id).copied(),
            Scheme::Fg(s) => s.partition_of(id),
        }
    }

    pub fn len(&self) -> usize {
        match self {
            Scheme::Dg(s) => s.len(),
            Scheme::Fg(s) => s.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}
