use core::fmt;

use serde::{Deserialize, Serialize};

/// Label of one of the four Bell states.
///
/// `x` is the bit-flip bit and `z` the phase bit:
/// `(0,0)=φ⁺, (0,1)=φ⁻, (1,0)=ψ⁺, (1,1)=ψ⁻`. The state is
/// `(|0,x⟩ + (−1)^z |1,1⊕x⟩)/√2`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct BellIndex {
    pub x: bool,
    pub z: bool,
}

impl BellIndex {
    pub const PHI_PLUS: BellIndex = BellIndex { x: false, z: false };
    pub const PHI_MINUS: BellIndex = BellIndex { x: false, z: true };
    pub const PSI_PLUS: BellIndex = BellIndex { x: true, z: false };
    pub const PSI_MINUS: BellIndex = BellIndex { x: true, z: true };

    /// All four labels in index order (`x*2 + z`).
    pub const ALL: [BellIndex; 4] = [
        Self::PHI_PLUS,
        Self::PHI_MINUS,
        Self::PSI_PLUS,
        Self::PSI_MINUS,
    ];

    pub const fn new(x: bool, z: bool) -> Self {
        BellIndex { x, z }
    }

    /// Two-bit code `x*2 + z`.
    pub const fn index(self) -> usize {
        (self.x as usize) << 1 | self.z as usize
    }

    /// Inverse of [`BellIndex::index`]; only the low two bits are used.
    pub const fn from_index(index: usize) -> Self {
        BellIndex {
            x: index & 0b10 != 0,
            z: index & 0b01 != 0,
        }
    }

    pub const fn xor(self, other: BellIndex) -> BellIndex {
        BellIndex {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        }
    }

    pub fn symbol(self) -> &'static str {
        match (self.x, self.z) {
            (false, false) => "φ+",
            (false, true) => "φ-",
            (true, false) => "ψ+",
            (true, true) => "ψ-",
        }
    }
}

impl fmt::Display for BellIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Label `(i, j, k)` of one of the eight three-qubit GHZ states.
///
/// `φ_ijk = (|j,i,0⟩ + (−1)^k |¬j,¬i,1⟩)/√2`, so `k` is the phase bit and
/// `(i, j)` select which computational pair appears.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct GhzIndex {
    pub i: bool,
    pub j: bool,
    pub k: bool,
}

impl GhzIndex {
    pub const ZERO: GhzIndex = GhzIndex::new(false, false, false);

    pub const fn new(i: bool, j: bool, k: bool) -> Self {
        GhzIndex { i, j, k }
    }

    /// Three-bit code `i*4 + j*2 + k`, i.e. the subscript read as binary.
    pub const fn index(self) -> usize {
        (self.i as usize) << 2 | (self.j as usize) << 1 | self.k as usize
    }

    pub const fn from_index(index: usize) -> Self {
        GhzIndex {
            i: index & 0b100 != 0,
            j: index & 0b010 != 0,
            k: index & 0b001 != 0,
        }
    }

    pub fn all() -> impl Iterator<Item = GhzIndex> {
        (0..8).map(GhzIndex::from_index)
    }

    pub const fn xor(self, other: GhzIndex) -> GhzIndex {
        GhzIndex {
            i: self.i ^ other.i,
            j: self.j ^ other.j,
            k: self.k ^ other.k,
        }
    }
}

impl fmt::Display for GhzIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "φ{}{}{}", self.i as u8, self.j as u8, self.k as u8)
    }
}

/// Local Pauli encoding `σx^p σz^q` (σz acts first).
///
/// `(0,0)=I, (0,1)=σz, (1,0)=σx, (1,1)=σxσz=iσy`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct PauliEncoding {
    pub p: bool,
    pub q: bool,
}

impl PauliEncoding {
    pub const IDENTITY: PauliEncoding = PauliEncoding { p: false, q: false };
    pub const Z: PauliEncoding = PauliEncoding { p: false, q: true };
    pub const X: PauliEncoding = PauliEncoding { p: true, q: false };
    pub const XZ: PauliEncoding = PauliEncoding { p: true, q: true };

    pub const ALL: [PauliEncoding; 4] = [Self::IDENTITY, Self::Z, Self::X, Self::XZ];

    pub const fn new(p: bool, q: bool) -> Self {
        PauliEncoding { p, q }
    }

    /// Two-bit message `pq` read as `p*2 + q`.
    pub const fn index(self) -> usize {
        (self.p as usize) << 1 | self.q as usize
    }

    pub const fn from_index(index: usize) -> Self {
        PauliEncoding {
            p: index & 0b10 != 0,
            q: index & 0b01 != 0,
        }
    }

    pub const fn xor(self, other: PauliEncoding) -> PauliEncoding {
        PauliEncoding {
            p: self.p ^ other.p,
            q: self.q ^ other.q,
        }
    }

    pub const fn is_identity(self) -> bool {
        !self.p && !self.q
    }
}

impl fmt::Display for PauliEncoding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.p as u8, self.q as u8)
    }
}

/// Label of one prepared entangled state, as announced by the controller.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum StateLabel {
    Bell(BellIndex),
    Ghz(GhzIndex),
}

impl StateLabel {
    pub fn n_qubits(self) -> usize {
        match self {
            StateLabel::Bell(_) => 2,
            StateLabel::Ghz(_) => 3,
        }
    }

    /// Classical bits needed to announce the label.
    pub fn bit_len(self) -> usize {
        match self {
            StateLabel::Bell(_) => 2,
            StateLabel::Ghz(_) => 3,
        }
    }

    pub fn index(self) -> usize {
        match self {
            StateLabel::Bell(b) => b.index(),
            StateLabel::Ghz(g) => g.index(),
        }
    }
}

impl fmt::Display for StateLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StateLabel::Bell(b) => b.fmt(f),
            StateLabel::Ghz(g) => g.fmt(f),
        }
    }
}
