//! Galaxies of enlargements of infinite digraphs.
//!
//! Two internal vertices lie in the same galaxy when their internal
//! distance `𝐝(u, v) = [d(u_n, v_n)]` is limited. The principal galaxy is
//! the one holding the standard vertices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::numbers::{HyperNat, QuasiPoly};
use crate::ultrapower::{Builtin, InternalElement, Sort, Ultrapower};

/// Source of internal distances. [`Ultrapower`] supplies the semipath
/// metric; other implementations can perturb it.
pub trait InternalMetric {
    fn ultrapower(&self) -> &Ultrapower;
    fn distance(&self, u: &InternalElement, v: &InternalElement) -> Result<HyperNat>;
}

impl Ultrapower {
    /// `𝐝(u, v)` for a family that is weakly connected almost everywhere.
    pub fn ns_distance(&self, u: &InternalElement, v: &InternalElement) -> Result<HyperNat> {
        for x in [u, v] {
            if x.sort() != Sort::Vertex {
                return Err(Error::SortMismatch { expected: "vertex", found: x.sort().name() });
            }
        }
        self.equality_set(u, v)?;
        if !self.is_weakly_connected_ae().holds {
            return Err(Error::NotWeaklyConnectedAe);
        }
        HyperNat::try_from(self.family().semi(u.labels(), v.labels())?.length)
    }
}

impl InternalMetric for Ultrapower {
    fn ultrapower(&self) -> &Ultrapower {
        self
    }

    fn distance(&self, u: &InternalElement, v: &InternalElement) -> Result<HyperNat> {
        self.ns_distance(u, v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LimitedDistance {
    pub limited: bool,
    /// The least standard `k` with `{n : d(u_n, v_n) ≤ k} ∈ ℱ`.
    pub bound: Option<u64>,
    pub distance: HyperNat,
}

pub fn limitedly_distant<M: InternalMetric>(m: &M, u: &InternalElement, v: &InternalElement) -> Result<LimitedDistance> {
    let distance = m.distance(u, v)?;
    let bound = distance.limit(&m.ultrapower().oracle());
    Ok(LimitedDistance { limited: bound.is_some(), bound, distance })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Galaxy {
    pub id: usize,
    /// Roster positions of the member vertices.
    pub vertices: Vec<usize>,
    /// Arc roster positions of the arcs assigned to this galaxy.
    pub arcs: Vec<usize>,
    pub principal: bool,
}

fn check_anchor(anchor: &InternalElement) -> Result<()> {
    if anchor.sort() == Sort::Vertex && anchor.labels().eventually_constant().is_some() {
        Ok(())
    } else {
        Err(Error::AnchorNotStandard)
    }
}

/// Partitions the roster into galaxies and assigns every roster arc to the
/// galaxy of its tail vertex. The galaxy limitedly distant from the standard
/// `anchor` is principal.
pub fn galaxy_partition<M: InternalMetric>(
    m: &M,
    roster: &[InternalElement],
    arc_roster: &[InternalElement],
    anchor: &InternalElement,
) -> Result<Vec<Galaxy>> {
    check_anchor(anchor)?;
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, v) in roster.iter().enumerate() {
        let mut home = None;
        for (c, class) in classes.iter().enumerate() {
            if limitedly_distant(m, &roster[class[0]], v)?.limited {
                home = Some(c);
                break;
            }
        }
        match home {
            Some(c) => classes[c].push(i),
            None => {
                m.distance(v, v)?;
                classes.push(vec![i]);
            }
        }
    }
    let mut galaxies = Vec::with_capacity(classes.len());
    for (id, vertices) in classes.into_iter().enumerate() {
        let principal = limitedly_distant(m, anchor, &roster[vertices[0]])?.limited;
        galaxies.push(Galaxy { id, vertices, arcs: Vec::new(), principal });
    }
    let up = m.ultrapower();
    for (j, a) in arc_roster.iter().enumerate() {
        if a.sort() != Sort::Arc {
            return Err(Error::SortMismatch { expected: "arc", found: a.sort().name() });
        }
        let tail = up.vertex(up.family().arc_tail(a.labels())?)?;
        let mut home = None;
        for g in &galaxies {
            if limitedly_distant(m, &roster[g.vertices[0]], &tail)?.limited {
                home = Some(g.id);
                break;
            }
        }
        galaxies[home.ok_or(Error::ArcOutsideRoster(j))?].arcs.push(j);
    }
    Ok(galaxies)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GalaxyRelation {
    ACloser,
    BCloser,
    Tied,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GalaxyOrder {
    pub relation: GalaxyRelation,
    /// `d(w_n, u_n) − d(v_n, u_n)`.
    pub difference: QuasiPoly,
}

/// Compares the galaxies of `v` and `w` by closeness to the principal
/// galaxy, measured from the standard `anchor`.
///
/// `Γ(v)` is closer when `{n : d(w_n, u_n) − d(v_n, u_n) ≥ m} ∈ ℱ` for every
/// standard `m`, i.e. when the difference grows without bound on the
/// oracle's residue class.
pub fn galaxy_order<M: InternalMetric>(
    m: &M,
    v: &InternalElement,
    w: &InternalElement,
    anchor: &InternalElement,
) -> Result<GalaxyOrder> {
    check_anchor(anchor)?;
    let dv = limitedly_distant(m, anchor, v)?;
    let dw = limitedly_distant(m, anchor, w)?;
    if dv.limited || dw.limited {
        return Err(Error::PrincipalGalaxy);
    }
    let difference = dw.distance.as_quasi().sub(dv.distance.as_quasi());
    let oracle = m.ultrapower().oracle();
    let tail = difference.class_poly(oracle.residue(difference.period()));
    let relation = match (tail.is_constant(), tail.eventual_sign()) {
        (true, _) => GalaxyRelation::Tied,
        (false, 1) => GalaxyRelation::ACloser,
        (false, _) => GalaxyRelation::BCloser,
    };
    Ok(GalaxyOrder { relation, difference })
}

/// Representatives of the galaxies `j ∈ range` of a chain around `[n]`:
/// `[(j+1)n]` for `j ≥ 0` and `[floor(n / 2^{-j})]` for `j < 0`, in order of
/// increasing distance from the principal galaxy.
pub fn galaxy_chain(up: &Ultrapower, range: std::ops::RangeInclusive<i64>) -> Result<Vec<(i64, InternalElement)>> {
    match up.family().builtin_tail() {
        Some(Builtin::OneWayDipathEnlargement | Builtin::TwoWayDipathEnlargement) if up.family().prefix().is_empty() => {}
        _ => {
            return Err(Error::UnsupportedFamily(format!(
                "galaxy chains are built on the dipath enlargements, not {}",
                up.family().name()
            )))
        }
    }
    range
        .map(|j| {
            let q = if j >= 0 {
                QuasiPoly::affine(j as i128 + 1, 0)
            } else {
                let exp = u32::try_from(-j).ok().filter(|&e| e < 120).ok_or_else(|| Error::Parse(format!("chain index {j} out of range")))?;
                QuasiPoly::identity().floor_div(1i128 << exp)
            };
            Ok((j, up.vertex(q)?))
        })
        .collect()
}

/// A vertex outside the principal galaxy of the enlargement of a locally
/// finite, infinite, weakly connected digraph.
pub fn unlimited_vertex_witness(up: &Ultrapower) -> Result<InternalElement> {
    if !up.family().is_locally_finite() {
        return Err(Error::NotLocallyFinite);
    }
    if up.is_hyperfinite().holds {
        return Err(Error::NotInfinite);
    }
    if !up.is_weakly_connected_ae().holds {
        return Err(Error::NotWeaklyConnectedAe);
    }
    let witness = up.vertex(QuasiPoly::identity())?;
    let anchor = up.vertex(QuasiPoly::zero())?;
    if limitedly_distant(up, &anchor, &witness)?.limited {
        return Err(Error::UnsupportedFamily(format!("no unlimited vertex found in {}", up.family().name())));
    }
    Ok(witness)
}
