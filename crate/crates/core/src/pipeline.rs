//! The boundary index pair, by both routes.
//!
//! For an elliptic operator the pair is `(ind of the minus-end boundary
//! operator, ind of the plus-end boundary operator)` -- this (minus, plus)
//! ordering is normalized project-wide. Each entry can be computed two ways:
//!
//! * topological route: winding-number difference over a point base,
//!   odd-Chern integral over a circle base;
//! * analytic route: finite-section truncation of the boundary operator
//!   (differential assembly, full order) or of the quantized boundary symbol.
//!
//! Boundary data enters either as a differential operator spec or directly
//! as a pair of boundary symbols (fiber loops over a point base, a 3-d grid
//! over a circle base). Direct symbol pairs are the general case: symbols of
//! differential type are constrained (their fiber dependence is polynomial),
//! and index values like -1 over a point base or odd values over a circle
//! base only occur for genuinely pseudodifferential boundary data.

use crate::chern::{self, SymbolGrid3, GRID_INVERTIBILITY_TOL};
use crate::error::{Error, Result};
use crate::linalg;
use crate::oracle::{
    numerical_index, DifferentialAssembler, GridSymbolQuantizer, LoopSymbolQuantizer, SweepRecord,
    ORACLE_DEFAULT_TOL,
};
use crate::symbol::{
    boundary_operator, boundary_symbol, check_uniform_ellipticity, spec_hash, BaseManifold,
    OperatorSpec, Side, SymbolGrid, ELLIPTICITY_TOL,
};
use crate::winding::{self, LoopSample};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::time::Instant;

/// The value of the index map: `(ind A^-, ind A^+)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IndexPair {
    pub ind_minus: i64,
    pub ind_plus: i64,
}

impl IndexPair {
    pub fn swapped(self) -> Self {
        IndexPair {
            ind_minus: self.ind_plus,
            ind_plus: self.ind_minus,
        }
    }
}

impl std::fmt::Display for IndexPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {})", self.ind_minus, self.ind_plus)
    }
}

/// Boundary symbol data of one side.
#[derive(Debug, Clone)]
pub enum SideSymbolData {
    /// Point base: the symbol's loops on the tau = -1 and tau = +1 fibers.
    PointLoops {
        fiber_minus: LoopSample,
        fiber_plus: LoopSample,
    },
    /// Circle base: the symbol sampled on T^2 x S^1.
    CircleGrid(SymbolGrid3),
}

impl SideSymbolData {
    fn k(&self) -> usize {
        match self {
            SideSymbolData::PointLoops { fiber_minus, .. } => fiber_minus.k(),
            SideSymbolData::CircleGrid(g) => g.k(),
        }
    }

    fn margin(&self) -> f64 {
        match self {
            SideSymbolData::PointLoops {
                fiber_minus,
                fiber_plus,
            } => fiber_minus
                .values()
                .iter()
                .chain(fiber_plus.values().iter())
                .map(linalg::smallest_singular_value)
                .fold(f64::INFINITY, f64::min),
            SideSymbolData::CircleGrid(g) => g.margin(),
        }
    }
}

/// A pair of directly-given boundary symbols.
#[derive(Debug, Clone)]
pub struct SymbolPairInput {
    pub base: BaseManifold,
    pub k: usize,
    pub minus: SideSymbolData,
    pub plus: SideSymbolData,
}

impl SymbolPairInput {
    pub fn new(base: BaseManifold, minus: SideSymbolData, plus: SideSymbolData) -> Result<Self> {
        let k = minus.k();
        if plus.k() != k {
            return Err(Error::MatrixSizeMismatch {
                left: k,
                right: plus.k(),
            });
        }
        let matches = |s: &SideSymbolData| match (base, s) {
            (BaseManifold::Point, SideSymbolData::PointLoops { .. }) => true,
            (BaseManifold::Circle, SideSymbolData::CircleGrid(_)) => true,
            _ => false,
        };
        if !matches(&minus) || !matches(&plus) {
            return Err(Error::Validation(
                "symbol data kind does not match the declared base".into(),
            ));
        }
        Ok(SymbolPairInput {
            base,
            k,
            minus,
            plus,
        })
    }

    fn side(&self, side: Side) -> &SideSymbolData {
        match side {
            Side::Minus => &self.minus,
            Side::Plus => &self.plus,
        }
    }
}

/// Input to the index pipeline.
#[derive(Debug, Clone)]
pub enum BoundaryData {
    Differential(OperatorSpec),
    Symbols(SymbolPairInput),
}

impl BoundaryData {
    pub fn base(&self) -> BaseManifold {
        match self {
            BoundaryData::Differential(s) => s.base(),
            BoundaryData::Symbols(p) => p.base,
        }
    }

    pub fn k(&self) -> usize {
        match self {
            BoundaryData::Differential(s) => s.k(),
            BoundaryData::Symbols(p) => p.k,
        }
    }

    pub fn swap_sides(&self) -> Self {
        match self {
            BoundaryData::Differential(s) => BoundaryData::Differential(s.swap_sides()),
            BoundaryData::Symbols(p) => BoundaryData::Symbols(SymbolPairInput {
                base: p.base,
                k: p.k,
                minus: p.plus.clone(),
                plus: p.minus.clone(),
            }),
        }
    }

    /// Content hash for reports.
    pub fn hash(&self) -> String {
        match self {
            BoundaryData::Differential(s) => spec_hash(s),
            BoundaryData::Symbols(p) => {
                let mut hasher = Sha256::new();
                fn feed_loop(hasher: &mut Sha256, l: &LoopSample) {
                    for m in l.values() {
                        for v in m.iter() {
                            hasher.update(v.re.to_le_bytes());
                            hasher.update(v.im.to_le_bytes());
                        }
                    }
                }
                for side in [&p.minus, &p.plus] {
                    match side {
                        SideSymbolData::PointLoops {
                            fiber_minus,
                            fiber_plus,
                        } => {
                            feed_loop(&mut hasher, fiber_minus);
                            feed_loop(&mut hasher, fiber_plus);
                        }
                        SideSymbolData::CircleGrid(g) => {
                            for v in g.values().iter() {
                                hasher.update(v.re.to_le_bytes());
                                hasher.update(v.im.to_le_bytes());
                            }
                        }
                    }
                }
                hasher
                    .finalize()
                    .iter()
                    .map(|b| format!("{b:02x}"))
                    .collect()
            }
        }
    }
}

/// Resolutions, radii and tolerances for one pipeline run.
#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub loop_samples: usize,
    pub chern_grid: (usize, usize, usize),
    pub ellipticity_grid: SymbolGrid,
    /// Truncation radii; None picks the base-dependent default.
    pub radii: Option<Vec<usize>>,
    pub tol: f64,
    pub allow_large: bool,
}

impl Default for PipelineConfig {
    fn default() -> Self {
        PipelineConfig {
            loop_samples: 64,
            chern_grid: (48, 48, 48),
            ellipticity_grid: SymbolGrid::default(),
            radii: None,
            tol: ORACLE_DEFAULT_TOL,
            allow_large: false,
        }
    }
}

impl PipelineConfig {
    pub fn radii_for(&self, base: BaseManifold) -> Vec<usize> {
        match &self.radii {
            Some(r) => r.clone(),
            None => match base {
                BaseManifold::Point => vec![32, 64],
                BaseManifold::Circle => vec![8, 12],
            },
        }
    }
}

/// Invertibility margin of the boundary data (symbol-level).
pub fn boundary_margin(data: &BoundaryData, config: &PipelineConfig) -> Result<f64> {
    match data {
        BoundaryData::Differential(spec) => {
            let (_, margin) = check_uniform_ellipticity(spec, config.ellipticity_grid)?;
            Ok(margin)
        }
        BoundaryData::Symbols(pair) => Ok(pair.minus.margin().min(pair.plus.margin())),
    }
}

fn ensure_elliptic(data: &BoundaryData, config: &PipelineConfig) -> Result<f64> {
    let margin = boundary_margin(data, config)?;
    let tol = match data {
        BoundaryData::Differential(_) => ELLIPTICITY_TOL,
        BoundaryData::Symbols(_) => GRID_INVERTIBILITY_TOL,
    };
    if margin <= tol {
        return Err(Error::NotElliptic { margin, tol });
    }
    Ok(margin)
}

fn topological_side(data: &BoundaryData, side: Side, config: &PipelineConfig) -> Result<i64> {
    match data {
        BoundaryData::Differential(spec) => {
            let symbol = boundary_symbol(spec, side);
            match spec.base() {
                BaseManifold::Point => {
                    let n = config.loop_samples;
                    let at = |tau_positive: bool| {
                        LoopSample::from_fn(n, |theta| symbol.eval_point_fiber(theta, tau_positive))
                    };
                    winding::noether_index(&at(false)?, &at(true)?)
                }
                BaseManifold::Circle => {
                    let grid = SymbolGrid3::from_boundary_symbol(&symbol, config.chern_grid)?;
                    chern::fedosov_index(&grid)
                }
            }
        }
        BoundaryData::Symbols(pair) => match pair.side(side) {
            SideSymbolData::PointLoops {
                fiber_minus,
                fiber_plus,
            } => winding::noether_index(fiber_minus, fiber_plus),
            SideSymbolData::CircleGrid(grid) => chern::fedosov_index(grid),
        },
    }
}

fn analytic_side(
    data: &BoundaryData,
    side: Side,
    config: &PipelineConfig,
) -> Result<(i64, Vec<SweepRecord>)> {
    let radii = config.radii_for(data.base());
    let computation = match data {
        BoundaryData::Differential(spec) => {
            let op = boundary_operator(spec, side, true);
            let assembler = DifferentialAssembler::new(&op);
            numerical_index(&assembler, &radii, config.tol, config.allow_large)?
        }
        BoundaryData::Symbols(pair) => match pair.side(side) {
            SideSymbolData::PointLoops {
                fiber_minus,
                fiber_plus,
            } => {
                let q = LoopSymbolQuantizer::new(fiber_minus, fiber_plus)?;
                numerical_index(&q, &radii, config.tol, config.allow_large)?
            }
            SideSymbolData::CircleGrid(grid) => {
                let q = GridSymbolQuantizer::new(grid)?;
                numerical_index(&q, &radii, config.tol, config.allow_large)?
            }
        },
    };
    Ok((computation.index, computation.records))
}

/// Index pair by the topological route (windings / odd Chern integrals).
pub fn delta1_topological(data: &BoundaryData, config: &PipelineConfig) -> Result<IndexPair> {
    ensure_elliptic(data, config)?;
    Ok(IndexPair {
        ind_minus: topological_side(data, Side::Minus, config)?,
        ind_plus: topological_side(data, Side::Plus, config)?,
    })
}

/// Index pair by the analytic route (stabilized finite sections, full-order
/// assembly for differential specs).
pub fn delta1_analytic(data: &BoundaryData, config: &PipelineConfig) -> Result<IndexPair> {
    ensure_elliptic(data, config)?;
    let (ind_minus, _) = analytic_side(data, Side::Minus, config)?;
    let (ind_plus, _) = analytic_side(data, Side::Plus, config)?;
    Ok(IndexPair {
        ind_minus,
        ind_plus,
    })
}

/// Outcome of one route in an agreement report.
#[derive(Debug, Clone, Serialize)]
pub struct RouteOutcome {
    pub pair: Option<IndexPair>,
    pub error: Option<String>,
    /// Wall-clock milliseconds; excluded from serialized reports so identical
    /// inputs produce identical bytes.
    #[serde(skip)]
    pub runtime_ms: u128,
}

/// Per-side oracle diagnostics (sweep records; errors named per side).
#[derive(Debug, Clone, Serialize, Default)]
pub struct AnalyticDiagnostics {
    pub minus_records: Vec<SweepRecord>,
    pub plus_records: Vec<SweepRecord>,
    pub minus_error: Option<String>,
    pub plus_error: Option<String>,
}

/// The full cross-validation report: both routes, agreement flag, margins.
#[derive(Debug, Clone, Serialize)]
pub struct AgreementReport {
    pub spec_hash: String,
    pub base: BaseManifold,
    pub k: usize,
    pub elliptic: bool,
    pub margin: f64,
    pub topological: RouteOutcome,
    pub analytic: RouteOutcome,
    pub agree: Option<bool>,
    pub diagnostics: AnalyticDiagnostics,
}

/// Run both routes and package everything, turning failures into report
/// content instead of errors.
pub fn verify_agreement(data: &BoundaryData, config: &PipelineConfig) -> AgreementReport {
    let spec_hash = data.hash();
    let margin = boundary_margin(data, config).unwrap_or(0.0);
    let tol = match data {
        BoundaryData::Differential(_) => ELLIPTICITY_TOL,
        BoundaryData::Symbols(_) => GRID_INVERTIBILITY_TOL,
    };
    let elliptic = margin > tol;

    let not_elliptic = || Error::NotElliptic { margin, tol };

    let t0 = Instant::now();
    let topo_result = if elliptic {
        delta1_topological(data, config)
    } else {
        Err(not_elliptic())
    };
    let topological = RouteOutcome {
        pair: topo_result.as_ref().ok().copied(),
        error: topo_result.as_ref().err().map(|e| e.to_string()),
        runtime_ms: t0.elapsed().as_millis(),
    };

    let t1 = Instant::now();
    let mut diagnostics = AnalyticDiagnostics::default();
    let mut ind_minus = None;
    let mut ind_plus = None;
    if elliptic {
        match analytic_side(data, Side::Minus, config) {
            Ok((i, records)) => {
                ind_minus = Some(i);
                diagnostics.minus_records = records;
            }
            Err(e) => diagnostics.minus_error = Some(e.to_string()),
        }
        match analytic_side(data, Side::Plus, config) {
            Ok((i, records)) => {
                ind_plus = Some(i);
                diagnostics.plus_records = records;
            }
            Err(e) => diagnostics.plus_error = Some(e.to_string()),
        }
    } else {
        diagnostics.minus_error = Some(not_elliptic().to_string());
        diagnostics.plus_error = Some(not_elliptic().to_string());
    }
    let analytic_pair = match (ind_minus, ind_plus) {
        (Some(ind_minus), Some(ind_plus)) => Some(IndexPair {
            ind_minus,
            ind_plus,
        }),
        _ => None,
    };
    let analytic_error = match (&diagnostics.minus_error, &diagnostics.plus_error) {
        (None, None) => None,
        (m, p) => Some(
            [m.as_deref().map(|e| format!("minus: {e}")), p.as_deref().map(|e| format!("plus: {e}"))]
                .into_iter()
                .flatten()
                .collect::<Vec<_>>()
                .join("; "),
        ),
    };
    let analytic = RouteOutcome {
        pair: analytic_pair,
        error: analytic_error,
        runtime_ms: t1.elapsed().as_millis(),
    };

    let agree = match (&topological.pair, &analytic.pair) {
        (Some(a), Some(b)) => Some(a == b),
        _ => None,
    };
    AgreementReport {
        spec_hash,
        base: data.base(),
        k: data.k(),
        elliptic,
        margin,
        topological,
        analytic,
        agree,
        diagnostics,
    }
}

// ---------------------------------------------------------------------------
// JSON input schema for direct symbol pairs
// ---------------------------------------------------------------------------

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SymbolPairJson {
    kind: String,
    base: BaseManifold,
    k: usize,
    minus: SideJson,
    plus: SideJson,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct SideJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    loops: Option<LoopsJson>,
    #[serde(skip_serializing_if = "Option::is_none")]
    grid: Option<GridJson>,
}

/// Loop values as [n][row][col][re, im].
type LoopValuesJson = Vec<Vec<Vec<[f64; 2]>>>;

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LoopsJson {
    tau_minus: LoopValuesJson,
    tau_plus: LoopValuesJson,
}

/// Grid values as [theta][x][psi][row][col][re, im].
type GridJson = Vec<Vec<Vec<Vec<Vec<[f64; 2]>>>>>;

fn loop_from_json(values: &LoopValuesJson, k: usize, context: &str) -> Result<LoopSample> {
    let mats = values
        .iter()
        .enumerate()
        .map(|(i, m)| {
            if m.len() != k || m.iter().any(|row| row.len() != k) {
                return Err(Error::Schema(format!(
                    "{context}: sample {i} is not a {k}x{k} matrix"
                )));
            }
            Ok(ndarray::Array2::from_shape_fn((k, k), |(r, c)| {
                Complex64::new(m[r][c][0], m[r][c][1])
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    LoopSample::from_values(mats)
}

fn grid_from_json(values: &GridJson, k: usize, context: &str) -> Result<SymbolGrid3> {
    let n0 = values.len();
    let n1 = values.first().map(|v| v.len()).unwrap_or(0);
    let n2 = values
        .first()
        .and_then(|v| v.first())
        .map(|v| v.len())
        .unwrap_or(0);
    let mut raw = Vec::with_capacity(n0 * n1 * n2 * k * k);
    for (i0, plane) in values.iter().enumerate() {
        if plane.len() != n1 {
            return Err(Error::Schema(format!("{context}: ragged grid at theta index {i0}")));
        }
        for (i1, line) in plane.iter().enumerate() {
            if line.len() != n2 {
                return Err(Error::Schema(format!(
                    "{context}: ragged grid at (theta, x) = ({i0}, {i1})"
                )));
            }
            for m in line {
                if m.len() != k || m.iter().any(|row| row.len() != k) {
                    return Err(Error::Schema(format!(
                        "{context}: grid entries must be {k}x{k} matrices"
                    )));
                }
                for row in m {
                    for v in row {
                        raw.push(Complex64::new(v[0], v[1]));
                    }
                }
            }
        }
    }
    let values = ndarray::Array::from_shape_vec((n0, n1, n2, k, k), raw)
        .map_err(|e| Error::Schema(format!("{context}: {e}")))?;
    SymbolGrid3::from_values((n0, n1, n2), k, values)
}

fn side_from_json(side: &SideJson, base: BaseManifold, k: usize, context: &str) -> Result<SideSymbolData> {
    match (base, &side.loops, &side.grid) {
        (BaseManifold::Point, Some(loops), None) => Ok(SideSymbolData::PointLoops {
            fiber_minus: loop_from_json(&loops.tau_minus, k, &format!("{context}.tau_minus"))?,
            fiber_plus: loop_from_json(&loops.tau_plus, k, &format!("{context}.tau_plus"))?,
        }),
        (BaseManifold::Circle, None, Some(grid)) => Ok(SideSymbolData::CircleGrid(grid_from_json(
            grid,
            k,
            context,
        )?)),
        _ => Err(Error::Schema(format!(
            "{context}: point base takes `loops`, circle base takes `grid`"
        ))),
    }
}

/// Parse a symbol-pair document (`"kind": "symbol_pair"`).
pub fn parse_symbol_pair(text: &str) -> Result<BoundaryData> {
    let json: SymbolPairJson =
        serde_json::from_str(text).map_err(|e| Error::Schema(format!("symbol pair: {e}")))?;
    if json.kind != "symbol_pair" {
        return Err(Error::Schema(format!(
            "unsupported input kind {:?}",
            json.kind
        )));
    }
    let minus = side_from_json(&json.minus, json.base, json.k, "minus")?;
    let plus = side_from_json(&json.plus, json.base, json.k, "plus")?;
    Ok(BoundaryData::Symbols(SymbolPairInput::new(
        json.base, minus, plus,
    )?))
}

fn loop_to_json(l: &LoopSample) -> LoopValuesJson {
    l.values()
        .iter()
        .map(|m| {
            (0..m.nrows())
                .map(|r| (0..m.ncols()).map(|c| [m[(r, c)].re, m[(r, c)].im]).collect())
                .collect()
        })
        .collect()
}

fn grid_to_json(g: &SymbolGrid3) -> GridJson {
    let (n0, n1, n2) = g.resolutions();
    let k = g.k();
    (0..n0)
        .map(|i0| {
            (0..n1)
                .map(|i1| {
                    (0..n2)
                        .map(|i2| {
                            (0..k)
                                .map(|r| {
                                    (0..k)
                                        .map(|c| {
                                            let v = g.values()[(i0, i1, i2, r, c)];
                                            [v.re, v.im]
                                        })
                                        .collect()
                                })
                                .collect()
                        })
                        .collect()
                })
                .collect()
        })
        .collect()
}

/// Serialize a symbol pair back to its JSON document form.
pub fn symbol_pair_to_json(pair: &SymbolPairInput) -> String {
    let side = |s: &SideSymbolData| match s {
        SideSymbolData::PointLoops {
            fiber_minus,
            fiber_plus,
        } => SideJson {
            loops: Some(LoopsJson {
                tau_minus: loop_to_json(fiber_minus),
                tau_plus: loop_to_json(fiber_plus),
            }),
            grid: None,
        },
        SideSymbolData::CircleGrid(g) => SideJson {
            loops: None,
            grid: Some(grid_to_json(g)),
        },
    };
    let json = SymbolPairJson {
        kind: "symbol_pair".into(),
        base: pair.base,
        k: pair.k,
        minus: side(&pair.minus),
        plus: side(&pair.plus),
    };
    serde_json::to_string(&json).expect("symbol pair serialization cannot fail")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::samples;
    use crate::symbol::{PeriodicFunction, SemiPeriodicCoefficient};

    fn toeplitz_pair_input() -> BoundaryData {
        // minus side trivial, plus side the Toeplitz calibration symbol
        let (ones, z) = samples::toeplitz_calibration_loops(64);
        let trivial = SideSymbolData::PointLoops {
            fiber_minus: ones.clone(),
            fiber_plus: ones.clone(),
        };
        let plus = SideSymbolData::PointLoops {
            fiber_minus: ones,
            fiber_plus: z,
        };
        BoundaryData::Symbols(SymbolPairInput::new(BaseManifold::Point, trivial, plus).unwrap())
    }

    #[test]
    fn calibration_pair_agrees_on_zero_minus_one() {
        let data = toeplitz_pair_input();
        let config = PipelineConfig::default();
        let topo = delta1_topological(&data, &config).unwrap();
        assert_eq!(
            topo,
            IndexPair {
                ind_minus: 0,
                ind_plus: -1
            }
        );
        let analytic = delta1_analytic(&data, &config).unwrap();
        assert_eq!(topo, analytic);
    }

    #[test]
    fn swapping_families_swaps_the_pair() {
        let data = toeplitz_pair_input();
        let config = PipelineConfig::default();
        let pair = delta1_topological(&data, &config).unwrap();
        let swapped = delta1_topological(&data.swap_sides(), &config).unwrap();
        assert_eq!(pair.swapped(), swapped);
    }

    #[test]
    fn constant_differential_spec_gives_zero_pair() {
        // multiplication by 2 (order 0): elliptic, trivial index pair
        let spec = OperatorSpec::new(
            BaseManifold::Point,
            1,
            0,
            vec![(
                (0, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(
                    Complex64::new(2.0, 0.0),
                )),
            )],
        )
        .unwrap();
        let data = BoundaryData::Differential(spec);
        let config = PipelineConfig::default();
        let topo = delta1_topological(&data, &config).unwrap();
        let analytic = delta1_analytic(&data, &config).unwrap();
        assert_eq!(
            topo,
            IndexPair {
                ind_minus: 0,
                ind_plus: 0
            }
        );
        assert_eq!(topo, analytic);
    }

    #[test]
    fn non_elliptic_spec_reports_structurally() {
        // symbol tau over a circle base vanishes on the fiber
        let spec = OperatorSpec::new(
            BaseManifold::Circle,
            1,
            1,
            vec![(
                (1, 0),
                SemiPeriodicCoefficient::symmetric(PeriodicFunction::constant_scalar(
                    Complex64::new(1.0, 0.0),
                )),
            )],
        )
        .unwrap();
        let data = BoundaryData::Differential(spec);
        let config = PipelineConfig::default();
        assert!(matches!(
            delta1_topological(&data, &config),
            Err(Error::NotElliptic { .. })
        ));
        let report = verify_agreement(&data, &config);
        assert!(!report.elliptic);
        assert_eq!(report.agree, None);
        assert!(report.topological.error.is_some());
        assert!(report.analytic.error.is_some());
    }

    #[test]
    fn symbol_pair_json_roundtrip() {
        let BoundaryData::Symbols(pair) = toeplitz_pair_input() else {
            unreachable!()
        };
        let text = symbol_pair_to_json(&pair);
        let parsed = parse_symbol_pair(&text).unwrap();
        let BoundaryData::Symbols(back) = parsed else {
            panic!("expected symbols")
        };
        assert_eq!(back.k, pair.k);
        assert_eq!(back.base, pair.base);
        let config = PipelineConfig::default();
        assert_eq!(
            delta1_topological(&BoundaryData::Symbols(back), &config).unwrap(),
            IndexPair {
                ind_minus: 0,
                ind_plus: -1
            }
        );
    }

    #[test]
    fn adjoint_family_negates_the_pair() {
        // order-0 spec with winding content: multiplication by e^{i theta}
        // on the plus end only; indices are zero but the negation must hold
        // structurally for the analytic route as well
        let spec = OperatorSpec::new(
            BaseManifold::Point,
            1,
            0,
            vec![(
                (0, 0),
                SemiPeriodicCoefficient::new(
                    PeriodicFunction::constant_scalar(Complex64::new(1.0, 0.0)),
                    PeriodicFunction::scalar_mode(1, 1, 0, Complex64::new(1.0, 0.0)),
                )
                .unwrap(),
            )],
        )
        .unwrap();
        let config = PipelineConfig::default();
        let direct = delta1_analytic(&BoundaryData::Differential(spec.clone()), &config).unwrap();
        let adjoint = delta1_analytic(
            &BoundaryData::Differential(spec.conj_transpose_family()),
            &config,
        )
        .unwrap();
        assert_eq!(direct.ind_minus, -adjoint.ind_minus);
        assert_eq!(direct.ind_plus, -adjoint.ind_plus);
    }
}
