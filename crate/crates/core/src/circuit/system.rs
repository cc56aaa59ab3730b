use std::fmt;

/// One wire of a circuit: a finite classical variable or a finite-dimensional
/// quantum system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Wire {
    /// Classical variable with the given number of values.
    Classical(usize),
    /// Quantum system with the given Hilbert-space dimension.
    Quantum(usize),
}

impl Wire {
    /// Size of the wire's factor in the vectorized state space:
    /// `n` for a classical wire, `d²` for a quantum one.
    #[inline]
    pub fn size(self) -> usize {
        match self {
            Wire::Classical(n) => n,
            Wire::Quantum(d) => d * d,
        }
    }

    /// Number of distinguishable basis states (`n` or `d`).
    #[inline]
    pub fn levels(self) -> usize {
        match self {
            Wire::Classical(n) | Wire::Quantum(n) => n,
        }
    }

    #[inline]
    pub fn is_classical(self) -> bool {
        matches!(self, Wire::Classical(_))
    }

    #[inline]
    pub fn is_quantum(self) -> bool {
        matches!(self, Wire::Quantum(_))
    }
}

impl fmt::Display for Wire {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Wire::Classical(n) => write!(f, "C{n}"),
            Wire::Quantum(d) => write!(f, "Q{d}"),
        }
    }
}

/// Flat, ordered list of wires. The empty list is the trivial system.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SystemType {
    wires: Vec<Wire>,
}

impl SystemType {
    pub fn new(wires: Vec<Wire>) -> Self {
        Self { wires }
    }

    pub fn trivial() -> Self {
        Self::default()
    }

    pub fn classical(n: usize) -> Self {
        Self::new(vec![Wire::Classical(n)])
    }

    pub fn quantum(d: usize) -> Self {
        Self::new(vec![Wire::Quantum(d)])
    }

    pub fn wires(&self) -> &[Wire] {
        &self.wires
    }

    pub fn len(&self) -> usize {
        self.wires.len()
    }

    pub fn is_empty(&self) -> bool {
        self.wires.is_empty()
    }

    /// Total vectorized dimension (product of wire sizes; 1 for the trivial system).
    pub fn dim(&self) -> usize {
        self.wires.iter().map(|w| w.size()).product()
    }

    /// Product of per-wire level counts: the Hilbert-space dimension for an
    /// all-quantum system, the number of joint values for an all-classical one.
    pub fn levels(&self) -> usize {
        self.wires.iter().map(|w| w.levels()).product()
    }

    pub fn is_all_classical(&self) -> bool {
        self.wires.iter().all(|w| w.is_classical())
    }

    pub fn is_all_quantum(&self) -> bool {
        self.wires.iter().all(|w| w.is_quantum())
    }

    /// `self ⊗ other`.
    pub fn concat(&self, other: &SystemType) -> SystemType {
        let mut wires = self.wires.clone();
        wires.extend_from_slice(&other.wires);
        SystemType { wires }
    }

    /// Sub-system made of the wires in `range`.
    pub fn slice(&self, range: std::ops::Range<usize>) -> SystemType {
        SystemType::new(self.wires[range].to_vec())
    }

    /// First wire index at which `self` and `other` differ, if any.
    pub fn first_mismatch(&self, other: &SystemType) -> Option<usize> {
        let common = self.wires.len().min(other.wires.len());
        (0..common)
            .find(|&i| self.wires[i] != other.wires[i])
            .or(if self.wires.len() != other.wires.len() {
                Some(common)
            } else {
                None
            })
    }
}

impl From<Vec<Wire>> for SystemType {
    fn from(wires: Vec<Wire>) -> Self {
        Self::new(wires)
    }
}

impl fmt::Display for SystemType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.wires.is_empty() {
            return write!(f, "I");
        }
        for (i, w) in self.wires.iter().enumerate() {
            if i > 0 {
                write!(f, "⊗")?;
            }
            write!(f, "{w}")?;
        }
        Ok(())
    }
}
