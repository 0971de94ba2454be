use std::collections::BTreeSet;

use crate::error::{invalid, Error, Result};
use crate::liealg::{u1_basis, AlgebraBasis, GroupKind};
use crate::linalg::CMat;

/// The left-acting (`U`) or right-acting (`V`) factor group.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sector {
    U,
    V,
}

impl Sector {
    pub const BOTH: [Sector; 2] = [Sector::U, Sector::V];
}

impl std::fmt::Display for Sector {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Sector::U => "U",
            Sector::V => "V",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Rep {
    Bifundamental,
    FundamentalU,
    FundamentalV,
    Singlet,
}

impl Rep {
    pub fn acts_on(self, sector: Sector) -> bool {
        matches!(
            (self, sector),
            (Rep::Bifundamental, _) | (Rep::FundamentalU, Sector::U) | (Rep::FundamentalV, Sector::V)
        )
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Rep::Bifundamental => "bifundamental",
            Rep::FundamentalU => "fundamental_U",
            Rep::FundamentalV => "fundamental_V",
            Rep::Singlet => "singlet",
        }
    }

    pub fn from_keyword(s: &str) -> Option<Self> {
        Some(match s {
            "bifundamental" => Rep::Bifundamental,
            "fundamental_U" => Rep::FundamentalU,
            "fundamental_V" => Rep::FundamentalV,
            "singlet" => Rep::Singlet,
            _ => return None,
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum FieldKind {
    Fermion,
    Scalar,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Chirality {
    Left,
    Right,
    None,
}

#[derive(Clone, Debug, PartialEq)]
pub struct FieldDecl {
    pub name: String,
    pub kind: FieldKind,
    pub rep: Rep,
    pub chirality: Chirality,
    /// U(1) charge, used by whichever factor is abelian.
    pub charge: Option<f64>,
    pub vev: Option<f64>,
}

impl FieldDecl {
    pub fn fermion(name: &str, rep: Rep) -> Self {
        Self {
            name: name.to_string(),
            kind: FieldKind::Fermion,
            rep,
            chirality: Chirality::None,
            charge: None,
            vev: None,
        }
    }

    pub fn scalar(name: &str, rep: Rep) -> Self {
        Self {
            kind: FieldKind::Scalar,
            ..Self::fermion(name, rep)
        }
    }

    pub fn with_chirality(mut self, chirality: Chirality) -> Self {
        self.chirality = chirality;
        self
    }

    pub fn with_charge(mut self, charge: f64) -> Self {
        self.charge = Some(charge);
        self
    }

    pub fn with_vev(mut self, vev: f64) -> Self {
        self.vev = Some(vev);
        self
    }

    /// Spinor components carried per internal matrix: 4 for fermions, 1 for scalars.
    pub fn spinor_len(&self) -> usize {
        match self.kind {
            FieldKind::Fermion => 4,
            FieldKind::Scalar => 1,
        }
    }
}

/// Sign of the commutator term in the right-acting field strength, fixed by
/// expanding `[D_μ, D_ν]φ` for `D_μφ = ∂_μφ + g_U W^U_μ φ + g_V φ W^V_μ`.
pub const ADOPTED_V_COMMUTATOR_SIGN: f64 = -1.0;

/// Two factor groups plus matter content.
#[derive(Clone, Debug, PartialEq)]
pub struct ModelSpec {
    pub name: String,
    basis_u: AlgebraBasis,
    basis_v: AlgebraBasis,
    fields: Vec<FieldDecl>,
    v_commutator_sign: f64,
}

impl ModelSpec {
    /// Field names must be unique. Representation consistency is checked
    /// lazily (see [`ModelSpec::validate`]) so that a partially broken
    /// model can still be run and report per-check failures.
    pub fn new(
        name: &str,
        basis_u: AlgebraBasis,
        basis_v: AlgebraBasis,
        fields: Vec<FieldDecl>,
    ) -> Result<Self> {
        let mut seen = BTreeSet::new();
        for f in &fields {
            if !seen.insert(f.name.as_str()) {
                return Err(invalid(format!("duplicate field name `{}`", f.name)));
            }
        }
        for (s, b) in [(Sector::U, &basis_u), (Sector::V, &basis_v)] {
            if !(b.coupling().is_finite() && b.coupling() != 0.0) {
                return Err(invalid(format!("coupling of sector {s} must be finite and nonzero")));
            }
        }
        Ok(Self {
            name: name.to_string(),
            basis_u,
            basis_v,
            fields,
            v_commutator_sign: ADOPTED_V_COMMUTATOR_SIGN,
        })
    }

    pub fn fields(&self) -> &[FieldDecl] {
        &self.fields
    }

    pub fn basis(&self, sector: Sector) -> &AlgebraBasis {
        match sector {
            Sector::U => &self.basis_u,
            Sector::V => &self.basis_v,
        }
    }

    pub fn coupling(&self, sector: Sector) -> f64 {
        self.basis(sector).coupling()
    }

    pub fn is_abelian(&self, sector: Sector) -> bool {
        self.basis(sector).is_abelian()
    }

    /// Override of the right-sector commutator sign. Only negative controls
    /// should ever set this to anything but the adopted value.
    pub fn with_v_commutator_sign(mut self, sign: f64) -> Self {
        self.v_commutator_sign = sign;
        self
    }

    pub fn v_commutator_sign(&self) -> f64 {
        self.v_commutator_sign
    }

    pub fn commutator_sign(&self, sector: Sector) -> f64 {
        match sector {
            Sector::U => 1.0,
            Sector::V => self.v_commutator_sign,
        }
    }

    /// Basis in which the gauge potentials `W_{aμ}` are expanded: the SU(n)
    /// generators, or the unit 1×1 generator for U(1) (so `W = −iB`).
    pub fn potential_basis(&self, sector: Sector) -> AlgebraBasis {
        let b = self.basis(sector);
        match b.kind() {
            GroupKind::Su(_) => b.clone(),
            GroupKind::U1 => u1_basis(2.0).with_coupling(b.coupling()),
        }
    }

    pub fn potential_count(&self, sector: Sector) -> usize {
        self.basis(sector).len()
    }

    /// Effective U(1) charge of `decl` in `sector`: the field's own charge,
    /// else the group default.
    pub fn field_charge(&self, sector: Sector, decl: &FieldDecl) -> Result<f64> {
        decl.charge
            .or(self.basis(sector).charge())
            .ok_or_else(|| Error::RepMismatch {
                field: decl.name.clone(),
                reason: format!("rep {} acts on U(1) sector {sector} but no charge is given", decl.rep.keyword()),
            })
    }

    /// Multiplier applied to the sector potential when it acts on `decl`:
    /// 1 for SU(n), `Y/2` for U(1).
    pub fn charge_factor(&self, sector: Sector, decl: &FieldDecl) -> Result<f64> {
        match self.basis(sector).kind() {
            GroupKind::Su(_) => Ok(1.0),
            GroupKind::U1 => Ok(self.field_charge(sector, decl)? / 2.0),
        }
    }

    /// Generator basis seen by `decl` in `sector` (U(1): `Y/2`).
    pub fn field_basis(&self, sector: Sector, decl: &FieldDecl) -> Result<AlgebraBasis> {
        let b = self.basis(sector);
        match b.kind() {
            GroupKind::Su(_) => Ok(b.clone()),
            GroupKind::U1 => Ok(u1_basis(self.field_charge(sector, decl)?).with_coupling(b.coupling())),
        }
    }

    /// Internal matrix shape `(rows, cols)` of one spinor component.
    pub fn field_shape(&self, decl: &FieldDecl) -> (usize, usize) {
        let rows = if decl.rep.acts_on(Sector::U) { self.basis_u.dim() } else { 1 };
        let cols = if decl.rep.acts_on(Sector::V) { self.basis_v.dim() } else { 1 };
        (rows, cols)
    }

    pub fn validate_field(&self, decl: &FieldDecl) -> Result<()> {
        for s in Sector::BOTH {
            if decl.rep.acts_on(s) && self.is_abelian(s) {
                self.field_charge(s, decl)?;
            }
        }
        if decl.kind == FieldKind::Scalar && decl.chirality != Chirality::None {
            return Err(Error::RepMismatch {
                field: decl.name.clone(),
                reason: "scalars carry no chirality".into(),
            });
        }
        Ok(())
    }

    /// All representation problems, one per offending field.
    pub fn validate(&self) -> Vec<Error> {
        self.fields.iter().filter_map(|f| self.validate_field(f).err()).collect()
    }

    pub fn field(&self, name: &str) -> Option<&FieldDecl> {
        self.fields.iter().find(|f| f.name == name)
    }

    /// Generator matrices for the potentials of `sector`.
    pub fn potential_generators(&self, sector: Sector) -> Vec<CMat> {
        self.potential_basis(sector).generators().to_vec()
    }
}
