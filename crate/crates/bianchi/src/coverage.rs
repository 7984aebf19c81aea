//! Grid certificates that the intersection discs cover the fundamental
//! domain `D = {u + v*omega : 0 <= u, v < 1}` of `C / O_d`.
//!
//! `D` is cut into an `n x n` grid of sub-parallelograms; a cell counts as
//! covered when all four corners lie in one closed disc, which by
//! convexity of both shapes is exact (neither conservative nor optimistic
//! for that cell). A fully covered grid certifies the covering; an
//! uncovered cell is inconclusive (the discs may still cover it without
//! any single disc containing it), so callers retry on a finer grid.
//!
//! Corner tests clear denominators and run on `i128` when the bounds
//! allow, falling back to big rationals otherwise; both paths are exact.

use crate::geometry::{Circle, QOmega};
use crate::ring::{
    self, rat_ceil, rat_floor, sqrt_upper_bound, Rational, RingParams,
};
use num::traits::{Signed, Zero};
use num::BigInt;
use rayon::prelude::*;
use std::io::Write;
use std::path::Path;

/// The fundamental parallelogram of `C / O_d`, spanned by `1` and `omega`.
#[derive(Debug, Clone, Copy)]
pub struct FundamentalDomain {
    params: RingParams,
}

impl FundamentalDomain {
    pub fn new(params: RingParams) -> Self {
        FundamentalDomain { params }
    }

    pub fn params(&self) -> RingParams {
        self.params
    }

    /// Half-open membership: `0 <= u, v < 1`.
    pub fn contains(&self, p: &QOmega) -> bool {
        let zero = Rational::zero();
        let one = Rational::from(BigInt::from(1));
        p.u >= zero && p.u < one && p.v >= zero && p.v < one
    }

    /// `norm(1 + omega)`, the squared diameter of the parallelogram.
    pub fn diameter_sq(&self) -> Rational {
        Rational::from(BigInt::from(self.params.one_plus_omega_norm()))
    }
}

/// One sub-parallelogram `[i/n, (i+1)/n] + [j/n, (j+1)/n] omega`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct GridCell {
    pub i: u32,
    pub j: u32,
    pub n: u32,
}

impl GridCell {
    pub fn corners(&self) -> [QOmega; 4] {
        let n = BigInt::from(self.n);
        let corner = |di: u32, dj: u32| {
            QOmega::new(
                Rational::new(BigInt::from(self.i + di), n.clone()),
                Rational::new(BigInt::from(self.j + dj), n.clone()),
            )
        };
        [corner(0, 0), corner(1, 0), corner(0, 1), corner(1, 1)]
    }
}

/// Outcome of one grid check. `witness` maps covered cells to the index
/// (in the checked circle list) of the first disc containing them.
#[derive(Debug, Clone)]
pub struct CoverResult {
    n: u32,
    covered: bool,
    uncovered: Vec<GridCell>,
    witness: Vec<u32>,
}

const NO_WITNESS: u32 = u32::MAX;

impl CoverResult {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn covered(&self) -> bool {
        self.covered
    }

    pub fn uncovered_cells(&self) -> &[GridCell] {
        &self.uncovered
    }

    pub fn witness_for(&self, i: u32, j: u32) -> Option<usize> {
        let w = self.witness[(j as usize) * (self.n as usize) + i as usize];
        (w != NO_WITNESS).then_some(w as usize)
    }
}

/// Exact corner test: the cell lies in the closed disc iff all four
/// corners do (both sets are convex). Boundary corners count as inside.
pub fn cell_in_circle(params: RingParams, cell: &GridCell, circle: &Circle) -> bool {
    cell.corners().iter().all(|p| circle.contains(params, p))
}

/// All `O_d`-translates of the circles whose discs could touch the
/// fundamental domain: shifts range over `norm(s) <= (diam(D) + r_max)^2`.
/// The originals come first (shift 0), so `index % circles.len()` recovers
/// the source circle of any translate.
pub fn expand_with_shifts(params: RingParams, circles: &[Circle]) -> Vec<Circle> {
    if circles.is_empty() {
        return Vec::new();
    }
    let diam_sq = Rational::from(BigInt::from(params.one_plus_omega_norm()));
    let rmax_sq = circles
        .iter()
        .map(|c| c.radius_sq.clone())
        .max()
        .unwrap();
    let bound = &diam_sq
        + &rmax_sq
        + Rational::from(BigInt::from(2)) * sqrt_upper_bound(&(&diam_sq * &rmax_sq), 9);
    let norm_bound = rat_floor(&bound);

    let mut shifts = vec![QOmega::zero()];
    for s in ring::enumerate_norm_le(params, &norm_bound) {
        shifts.push(QOmega::from_quadint(&s));
        shifts.push(QOmega::from_quadint(&-&s));
    }
    let mut out = Vec::with_capacity(shifts.len() * circles.len());
    for shift in &shifts {
        for circle in circles {
            out.push(circle.translate(shift));
        }
    }
    out
}

/// Per-circle data for the corner test, in cleared-denominator form. The
/// corner `(i/n, j/n)` lies in the disc iff
/// `Q(i*q - n*p1, j*q - n*p2) * rq <= rp * (n*q)^2`.
enum PreCircle {
    Fast {
        p1: i128,
        p2: i128,
        q: i128,
        res: i128,
        rq: i128,
        rhs: i128,
    },
    Slow(Circle),
}

impl PreCircle {
    fn build(params: RingParams, circle: &Circle, res: u32) -> PreCircle {
        let qu = circle.center.u.denom().clone();
        let qv = circle.center.v.denom().clone();
        let q: BigInt = num::integer::lcm(qu.clone(), qv.clone());
        let p1 = circle.center.u.numer() * (&q / &qu);
        let p2 = circle.center.v.numer() * (&q / &qv);
        let rp = circle.radius_sq.numer().clone();
        let rq = circle.radius_sq.denom().clone();
        let res_big = BigInt::from(res);
        let l = &res_big * &q;
        let rhs = &rp * &l * &l;

        // conservative overflow check for the i128 fast path
        let coord_max = &res_big * (&q + p1.abs().max(p2.abs()));
        let form_factor = BigInt::from(1 + params.t().abs() + params.n());
        let lhs_max = &coord_max * &coord_max * &form_factor * &rq * BigInt::from(4);
        let limit = BigInt::from(i128::MAX / 4);
        if lhs_max < limit && rhs.abs() < limit {
            PreCircle::Fast {
                p1: i128::try_from(&p1).unwrap(),
                p2: i128::try_from(&p2).unwrap(),
                q: i128::try_from(&q).unwrap(),
                res: res as i128,
                rq: i128::try_from(&rq).unwrap(),
                rhs: i128::try_from(&rhs).unwrap(),
            }
        } else {
            PreCircle::Slow(circle.clone())
        }
    }

    /// Corner test for the fast variant; the slow variant is dispatched
    /// through [`cell_in_circle`] by the caller.
    fn corner_inside(&self, params: RingParams, ci: u32, cj: u32) -> bool {
        let PreCircle::Fast {
            p1,
            p2,
            q,
            res,
            rq,
            rhs,
        } = self
        else {
            unreachable!("slow path handled by the caller");
        };
        let x = ci as i128 * q - res * p1;
        let y = cj as i128 * q - res * p2;
        let t = params.t() as i128;
        let n = params.n() as i128;
        let lhs = (x * x + t * x * y + n * y * y) * rq;
        lhs <= *rhs
    }
}

/// Checks whether every grid cell is contained in one of the circles.
/// The circle list must already include whatever translates are relevant
/// (see [`expand_with_shifts`]); the witness indices refer to this list.
pub fn check_cover(params: RingParams, circles: &[Circle], n: u32) -> CoverResult {
    assert!(n >= 1, "grid resolution must be at least 1");
    let res = n;

    struct Entry {
        idx: u32,
        pre: PreCircle,
        i_lo: u32,
        i_hi: u32, // inclusive cell column range
        j_lo: u32,
        j_hi: u32, // inclusive cell row range
    }

    let four = Rational::from(BigInt::from(4));
    let disc = Rational::from(BigInt::from(params.form_discriminant()));
    let n_rat = Rational::from(BigInt::from(params.n()));
    let res_rat = Rational::from(BigInt::from(res));

    let entries: Vec<Entry> = circles
        .iter()
        .enumerate()
        .filter_map(|(idx, circle)| {
            // coordinate extents of the disc (an ellipse in (u, v) space):
            // eu^2 = 4 n r^2 / (4n - t^2), ev^2 = 4 r^2 / (4n - t^2)
            let ev_sq = &four * &circle.radius_sq / &disc;
            let eu_sq = &ev_sq * &n_rat;
            let eu = sqrt_upper_bound(&eu_sq, 9);
            let ev = sqrt_upper_bound(&ev_sq, 9);
            let i_lo = rat_floor(&(&res_rat * &(&circle.center.u - &eu)));
            let i_hi = rat_ceil(&(&res_rat * &(&circle.center.u + &eu)));
            let j_lo = rat_floor(&(&res_rat * &(&circle.center.v - &ev)));
            let j_hi = rat_ceil(&(&res_rat * &(&circle.center.v + &ev)));
            let max_cell = BigInt::from(res - 1);
            if i_hi.is_negative()
                || j_hi.is_negative()
                || i_lo > max_cell
                || j_lo > max_cell
            {
                return None;
            }
            let clamp = |v: BigInt| -> u32 {
                if v.is_negative() {
                    0
                } else if v > max_cell {
                    res - 1
                } else {
                    u32::try_from(&v).unwrap()
                }
            };
            Some(Entry {
                idx: idx as u32,
                pre: PreCircle::build(params, circle, res),
                i_lo: clamp(i_lo),
                i_hi: clamp(i_hi),
                j_lo: clamp(j_lo),
                j_hi: clamp(j_hi),
            })
        })
        .collect();

    // bucket circles by the cell rows they can touch
    let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); res as usize];
    for (k, e) in entries.iter().enumerate() {
        for j in e.j_lo..=e.j_hi {
            buckets[j as usize].push(k);
        }
    }

    let rows: Vec<Vec<u32>> = (0..res)
        .into_par_iter()
        .map(|j| {
            let mut row = vec![NO_WITNESS; res as usize];
            for &k in &buckets[j as usize] {
                let e = &entries[k];
                for i in e.i_lo..=e.i_hi {
                    if row[i as usize] != NO_WITNESS {
                        continue;
                    }
                    let inside = match &e.pre {
                        PreCircle::Fast { .. } => {
                            e.pre.corner_inside(params, i, j)
                                && e.pre.corner_inside(params, i + 1, j)
                                && e.pre.corner_inside(params, i, j + 1)
                                && e.pre.corner_inside(params, i + 1, j + 1)
                        }
                        PreCircle::Slow(circle) => {
                            cell_in_circle(params, &GridCell { i, j, n: res }, circle)
                        }
                    };
                    if inside {
                        row[i as usize] = e.idx;
                    }
                }
            }
            row
        })
        .collect();

    let mut witness = Vec::with_capacity((res as usize) * (res as usize));
    let mut uncovered = Vec::new();
    for (j, row) in rows.iter().enumerate() {
        for (i, w) in row.iter().enumerate() {
            witness.push(*w);
            if *w == NO_WITNESS {
                uncovered.push(GridCell {
                    i: i as u32,
                    j: j as u32,
                    n: res,
                });
            }
        }
    }
    CoverResult {
        n: res,
        covered: uncovered.is_empty(),
        uncovered,
        witness,
    }
}

/// Runs [`check_cover`], doubling the resolution on failure up to `cap`
/// (a failed grid is only inconclusive). Returns the first success or the
/// final failed attempt.
pub fn certify(params: RingParams, circles: &[Circle], start_n: u32, cap: u32) -> CoverResult {
    let mut n = start_n.max(1);
    loop {
        let result = check_cover(params, circles, n);
        if result.covered() || n.saturating_mul(2) > cap {
            return result;
        }
        n *= 2;
    }
}

/// Renders the covering as an SVG: the fundamental parallelogram in red,
/// every disc in translucent blue, uncovered cells shaded orange.
///
/// Coordinate mapping: the complex plane is drawn with the real axis
/// horizontal, `z = u + v*omega` at pixel
/// `(margin + scale * re(z), height - margin - scale * im(z))`, with the
/// scale chosen so the parallelogram (corners `0`, `1`, `1 + omega`,
/// `omega`) fits an 800-pixel-wide canvas with a 40-pixel margin.
pub fn render_figure(
    params: RingParams,
    circles: &[Circle],
    cover: &CoverResult,
    path: &Path,
) -> std::io::Result<()> {
    let t = params.t() as f64;
    let n = params.n() as f64;
    let im_omega = (4.0 * n - t * t).sqrt() / 2.0;
    let re_omega = t / 2.0;

    let to_xy = |p: &QOmega| -> (f64, f64) {
        let u = rat_f64(&p.u);
        let v = rat_f64(&p.v);
        (u + v * re_omega, v * im_omega)
    };

    let width = 800.0f64;
    let margin = 40.0f64;
    let extent_x = 1.0 + re_omega + 1.0; // domain plus one unit of slack each side
    let scale = (width - 2.0 * margin) / extent_x;
    let height = 2.0 * margin + scale * (im_omega + 2.0);
    let px = |x: f64| margin + scale * (x + 1.0);
    let py = |y: f64| height - margin - scale * (y + 1.0);

    let mut svg = String::new();
    svg.push_str(&format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{:.0}\" height=\"{:.0}\" \
         viewBox=\"0 0 {:.0} {:.0}\">\n",
        width, height, width, height
    ));
    svg.push_str("<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n");

    for circle in circles {
        let (x, y) = to_xy(&circle.center);
        let r = rat_f64(&circle.radius_sq).sqrt();
        svg.push_str(&format!(
            "<circle cx=\"{:.3}\" cy=\"{:.3}\" r=\"{:.3}\" fill=\"#9ecae1\" \
             fill-opacity=\"0.45\" stroke=\"#3182bd\" stroke-width=\"0.6\"/>\n",
            px(x),
            py(y),
            scale * r
        ));
    }

    for cell in cover.uncovered_cells() {
        let corners = cell.corners();
        let pts: Vec<String> = [0usize, 1, 3, 2]
            .iter()
            .map(|&k| {
                let (x, y) = to_xy(&corners[k]);
                format!("{:.3},{:.3}", px(x), py(y))
            })
            .collect();
        svg.push_str(&format!(
            "<polygon points=\"{}\" fill=\"#fd8d3c\" fill-opacity=\"0.8\"/>\n",
            pts.join(" ")
        ));
    }

    // the domain outline goes on top
    let corners = [
        QOmega::new(Rational::zero(), Rational::zero()),
        QOmega::new(Rational::from(BigInt::from(1)), Rational::zero()),
        QOmega::new(Rational::from(BigInt::from(1)), Rational::from(BigInt::from(1))),
        QOmega::new(Rational::zero(), Rational::from(BigInt::from(1))),
    ];
    let pts: Vec<String> = corners
        .iter()
        .map(|p| {
            let (x, y) = to_xy(p);
            format!("{:.3},{:.3}", px(x), py(y))
        })
        .collect();
    svg.push_str(&format!(
        "<polygon points=\"{}\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n",
        pts.join(" ")
    ));
    svg.push_str("</svg>\n");

    let mut file = std::fs::File::create(path)?;
    file.write_all(svg.as_bytes())
}

fn rat_f64(r: &Rational) -> f64 {
    let scaled = (r * Rational::from(BigInt::from(1u64 << 40))).to_integer();
    // presentation-only conversion; decision paths never use floats
    i128::try_from(&scaled).map(|v| v as f64).unwrap_or(f64::MAX) / (1u64 << 40) as f64
}
