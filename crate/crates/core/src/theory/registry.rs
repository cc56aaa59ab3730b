use super::updates::{
    classical_copy_recovery, classical_copy_update, collapse_update_on, naimark_isometry,
    naimark_update_on, recovery_for_isometry,
};
use super::{Extractor, MemoryUpdate, TheoryError};
use crate::circuit::Transform;

/// The built-in theories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TheoryKind {
    /// Every POVM is recorded by its Naimark isometry.
    QuantumIsometric,
    /// Every POVM is recorded classically and the system re-prepared.
    QuantumCollapse,
    /// Classical extractors, recorded by copying the input.
    ClassicalCopy,
}

impl TheoryKind {
    pub fn name(self) -> &'static str {
        match self {
            TheoryKind::QuantumIsometric => "isometric",
            TheoryKind::QuantumCollapse => "collapse",
            TheoryKind::ClassicalCopy => "classical",
        }
    }

    /// The update this theory pairs with `e`, with its recovery when the
    /// update is information preserving.
    pub fn partner(self, e: &Extractor, tol: f64) -> Result<(MemoryUpdate, Option<Transform>), TheoryError> {
        match self {
            TheoryKind::QuantumIsometric => {
                let povm = e.povm_elements()?;
                let memory = e.quantum_memory();
                let update = naimark_update_on(&povm, e.input(), &memory, tol)?;
                let v = naimark_isometry(&povm, tol)?;
                let recovery = recovery_for_isometry(&v, e.input(), update.output(), 10.0 * tol)?;
                Ok((update, Some(recovery)))
            }
            TheoryKind::QuantumCollapse => {
                let povm = e.povm_elements()?;
                let update = collapse_update_on(&povm, e.input(), &e.quantum_memory(), tol)?;
                Ok((update, None))
            }
            TheoryKind::ClassicalCopy => {
                let update = classical_copy_update(e)?;
                let recovery = classical_copy_recovery(&update);
                Ok((update, Some(recovery)))
            }
        }
    }
}

impl std::fmt::Display for TheoryKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for TheoryKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "isometric" => Ok(TheoryKind::QuantumIsometric),
            "collapse" => Ok(TheoryKind::QuantumCollapse),
            "classical" => Ok(TheoryKind::ClassicalCopy),
            other => Err(format!("unknown theory `{other}`")),
        }
    }
}

/// One entry of the pairing `f`.
#[derive(Clone, Debug, PartialEq)]
pub struct Pair {
    pub extractor: Extractor,
    pub update: MemoryUpdate,
    pub recovery: Option<Transform>,
}

/// The bijection between extractors and memory updates, with optional
/// recovery channels witnessing information preservation.
///
/// Registries are values: [`register`](Self::register) returns a new one.
#[derive(Clone, Debug)]
pub struct PerspectivalRegistry {
    kind: Option<TheoryKind>,
    pairs: Vec<Pair>,
    tol: f64,
}

impl PerspectivalRegistry {
    /// An empty registry with no built-in pairing rule.
    pub fn new(tol: f64) -> Self {
        Self {
            kind: None,
            pairs: Vec::new(),
            tol,
        }
    }

    /// An empty registry that pairs new extractors by `kind`'s rule.
    pub fn builtin(kind: TheoryKind, tol: f64) -> Self {
        Self {
            kind: Some(kind),
            pairs: Vec::new(),
            tol,
        }
    }

    pub fn kind(&self) -> Option<TheoryKind> {
        self.kind
    }

    pub fn tol(&self) -> f64 {
        self.tol
    }

    pub fn pairs(&self) -> &[Pair] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn register(
        &self,
        extractor: Extractor,
        update: MemoryUpdate,
        recovery: Option<Transform>,
    ) -> Result<Self, TheoryError> {
        if let Some(index) = self.find_extractor(&extractor) {
            return Err(TheoryError::DuplicateExtractor { index });
        }
        if let Some(index) = self.find_update(&update) {
            return Err(TheoryError::DuplicateUpdate { index });
        }
        if let Some(r) = &recovery {
            let id = Transform::identity(update.input());
            let deviation = match r.after(update.inner()) {
                Ok(t) if t.input() == id.input() && t.output() == id.output() => {
                    t.transfer().max_abs_diff(id.transfer())
                }
                _ => f64::INFINITY,
            };
            if deviation > self.tol {
                return Err(TheoryError::BadRecovery { deviation });
            }
        }
        let mut next = self.clone();
        next.pairs.push(Pair {
            extractor,
            update,
            recovery,
        });
        Ok(next)
    }

    /// Registers `e` with its built-in partner unless already present.
    pub fn with_extractor(&self, e: &Extractor) -> Result<(Self, usize), TheoryError> {
        if let Some(index) = self.find_extractor(e) {
            return Ok((self.clone(), index));
        }
        let kind = self
            .kind
            .ok_or(TheoryError::NotRegistered("extractor"))?;
        let (update, recovery) = kind.partner(e, self.tol)?;
        let next = self.register(e.clone(), update, recovery)?;
        let index = next.len() - 1;
        Ok((next, index))
    }

    pub fn find_extractor(&self, e: &Extractor) -> Option<usize> {
        self.pairs
            .iter()
            .position(|p| p.extractor.operationally_eq(e, self.tol))
    }

    pub fn find_update(&self, u: &MemoryUpdate) -> Option<usize> {
        self.pairs
            .iter()
            .position(|p| p.update.operationally_eq(u, self.tol))
    }

    /// `f(E)`.
    pub fn f_map(&self, e: &Extractor) -> Result<&MemoryUpdate, TheoryError> {
        self.find_extractor(e)
            .map(|i| &self.pairs[i].update)
            .ok_or(TheoryError::NotRegistered("extractor"))
    }

    /// `f⁻¹(U)`.
    pub fn f_inverse(&self, u: &MemoryUpdate) -> Result<&Extractor, TheoryError> {
        self.find_update(u)
            .map(|i| &self.pairs[i].extractor)
            .ok_or(TheoryError::NotRegistered("update"))
    }

    pub fn recovery(&self, u: &MemoryUpdate) -> Result<Option<&Transform>, TheoryError> {
        self.find_update(u)
            .map(|i| self.pairs[i].recovery.as_ref())
            .ok_or(TheoryError::NotRegistered("update"))
    }
}

/// The extractor `E′ = E ∘ R` on `U`'s output with `E′ ∘ U = E`.
pub fn ip_witness(reg: &PerspectivalRegistry, u: &MemoryUpdate, e: &Extractor) -> Result<Extractor, TheoryError> {
    let r = reg.recovery(u)?.ok_or(TheoryError::NoRecovery)?;
    witness_from_recovery(r, u.inner(), e, reg.tol())
}

/// `E ∘ recovery`, checked against `E′ ∘ update = E` within `tol`.
pub fn witness_from_recovery(
    recovery: &Transform,
    update: &Transform,
    e: &Extractor,
    tol: f64,
) -> Result<Extractor, TheoryError> {
    let witness = e.after(recovery, tol)?;
    let replay = witness.inner().after(update)?;
    let deviation = replay.transfer().max_abs_diff(e.inner().transfer());
    if replay.input() != e.input() || deviation > tol {
        return Err(TheoryError::BadRecovery { deviation });
    }
    Ok(witness)
}
