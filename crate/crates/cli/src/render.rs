//! Plain-text tables for expansions and matrix answers.

use std::collections::BTreeMap;
use std::fmt::Write;

use hermite_core::dirichlet::Q3Answer;
use hermite_core::engines::MonteCarloReport;
use hermite_core::{Algorithm, Answer, Element, Expansion, Status};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

fn row_labels(algorithm: Algorithm, width: usize) -> Vec<String> {
    match (algorithm, width) {
        (Algorithm::Euclid, _) => vec!["a".into()],
        (Algorithm::JacobiPerron, _) => vec!["⌊x/y⌋".into(), "⌊z/y⌋".into()],
        (Algorithm::Apd, 2) => vec!["a".into(), "b".into()],
        (_, w) => (1..=w).map(|i| format!("a{i}")).collect(),
    }
}

/// Step columns with the period block set off by `|`, then a status line.
pub fn expansion(e: &Expansion) -> String {
    let mut out = format!("{}  {}\n", e.algorithm, e.input);
    let tuples: Vec<&[BigInt]> = e.steps.iter().filter_map(|s| s.element.tuple()).collect();
    if tuples.len() == e.steps.len() && !tuples.is_empty() {
        let labels = row_labels(e.algorithm, tuples[0].len());
        let bars = bar_positions(e);
        let mut grid: Vec<Vec<String>> = vec![e.steps.iter().map(|s| s.index.to_string()).collect()];
        for r in 0..labels.len() {
            grid.push(tuples.iter().map(|t| t.get(r).map_or(String::new(), |x| x.to_string())).collect());
        }
        let lw = labels.iter().map(|l| l.chars().count()).max().unwrap_or(0).max(4);
        let widths: Vec<usize> = (0..e.steps.len())
            .map(|j| grid.iter().map(|row| row[j].len()).max().unwrap_or(1))
            .collect();
        for (i, row) in grid.iter().enumerate() {
            let label = if i == 0 { "step" } else { labels[i - 1].as_str() };
            let pad = lw - label.chars().count();
            let mut line = format!("{label}{}", " ".repeat(pad));
            for (j, cell) in row.iter().enumerate() {
                if bars.contains(&j) {
                    line.push_str(" |");
                }
                let _ = write!(line, " {cell:>w$}", w = widths[j]);
            }
            out.push_str(line.trim_end());
            out.push('\n');
        }
    } else {
        for s in &e.steps {
            if let Element::Matrix(m) = &s.element {
                let _ = writeln!(out, "step {}\n{m}", s.index);
            }
        }
    }
    if !e.tie_flags.is_empty() {
        let _ = writeln!(out, "tie broken at steps {:?}", e.tie_flags);
    }
    out.push_str(&status_line(e));
    out
}

fn bar_positions(e: &Expansion) -> Vec<usize> {
    match (e.preperiod, e.period) {
        (Some(pre), Some(per)) => [pre, pre + per].into_iter().filter(|&j| j < e.steps.len()).collect(),
        _ => Vec::new(),
    }
}

fn status_line(e: &Expansion) -> String {
    match e.status {
        Status::Terminated => format!("terminated after {} steps, final state ({})\n", e.steps.len(), e.final_state.join(", ")),
        Status::Periodic => {
            let mut s = format!(
                "pre-period {}, period {}\n",
                e.preperiod.unwrap_or(0),
                e.period.unwrap_or(0)
            );
            if let (Some(a), Some(b)) = (e.element_preperiod, e.element_period) {
                if (Some(a), Some(b)) != (e.preperiod, e.period) {
                    let _ = writeln!(s, "elements repeat from step {a} with period {b}");
                }
            }
            s
        }
        Status::Inconclusive => format!("no period within {} steps\n", e.steps.len()),
    }
}

pub fn matrix_answer(a: &Answer) -> String {
    let mut out = format!("{}\n{}\n", a.system, a.assembly.m);
    let _ = writeln!(
        out,
        "algorithm {}, eigenvalue {}, dominant {}{}",
        a.expansion.algorithm,
        a.assembly.eigenvalue,
        a.assembly.dominant,
        if a.assembly.inverted { ", inverted" } else { "" }
    );
    out
}

pub fn q3_answer(q: &Q3Answer) -> String {
    let mut out = String::new();
    for (i, (e, r)) in q.builds.iter().enumerate() {
        let mark = if i == q.chosen { " (chosen)" } else { "" };
        match r {
            Ok(a) => {
                let _ = writeln!(out, "embedding {}{mark}\n{}", e.index, a.matrix());
            }
            Err(err) => {
                let _ = writeln!(out, "embedding {}: {err}", e.index);
            }
        }
    }
    let _ = writeln!(out, "excluded embeddings {} (A) and {} (A⁻¹)", q.excluded.0.index, q.excluded.1.index);
    out
}

/// Frequencies of a supplied element list.
pub fn frequencies(f: &BTreeMap<BigInt, BigRational>, n: usize, expected: &[(u64, f64)]) -> String {
    let mut out = format!("{n} elements\n k  frequency  expected\n");
    for &(k, g) in expected {
        let q = f.get(&BigInt::from(k)).cloned().unwrap_or_else(BigRational::zero);
        let _ = writeln!(out, "{k:>2}  {:>9}  {g:>8.5}", q.to_string());
    }
    out
}

pub fn stats(r: &MonteCarloReport, expected: &[(u64, f64)]) -> String {
    let mut out = format!(
        "{} samples x {} elements, {} bits, seed {}, {} elements counted\n",
        r.samples, r.elements_per_sample, r.bits, r.seed, r.total
    );
    out.push_str(" k  empirical  expected\n");
    for &(k, g) in expected {
        let f = num_traits::ToPrimitive::to_f64(&r.frequency(k)).unwrap_or(f64::NAN);
        let _ = writeln!(out, "{k:>2}  {f:>9.5}  {g:>8.5}");
    }
    out
}
