//! Sparse SDPA (`.dat-s`) export and re-import.
//!
//! Layout: the Gram block comes first, then (when present) a diagonal slack
//! block carrying the inequality rows, then a diagonal block of split
//! nonnegative pairs `u = u⁺ − u⁻` carrying the free scalars. The file
//! encodes the pair `max ⟨F₀, X⟩ s.t. ⟨Fᵢ, X⟩ = bᵢ, X ⪰ 0`; entry lines are
//! emitted in sorted order and floats print in shortest round-trip form, so
//! exports are byte-deterministic and re-reading reproduces the problem
//! exactly.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::numkit::SymMatrix;
use crate::pep::{Relation, SdpConstraint, SdpProblem};

struct Entry {
    mat: usize,
    block: usize,
    i: usize,
    j: usize,
    value: f64,
}

fn push_block_entries(entries: &mut Vec<Entry>, mat: usize, block: usize, m: &SymMatrix) {
    let n = m.dim();
    for i in 0..n {
        for j in i..n {
            let v = m.get(i, j);
            if v != 0.0 {
                entries.push(Entry { mat, block, i: i + 1, j: j + 1, value: v });
            }
        }
    }
}

fn push_free_entries(entries: &mut Vec<Entry>, mat: usize, block: usize, coeffs: &[f64]) {
    for (j, &v) in coeffs.iter().enumerate() {
        if v != 0.0 {
            entries.push(Entry { mat, block, i: 2 * j + 1, j: 2 * j + 1, value: v });
            entries.push(Entry { mat, block, i: 2 * j + 2, j: 2 * j + 2, value: -v });
        }
    }
}

/// Writes the problem in sparse SDPA form.
pub fn export_sdpa<W: Write>(sdp: &SdpProblem, w: &mut W) -> Result<()> {
    let m = sdp.constraints.len();
    let q = sdp.num_free;
    let ineq_rows: Vec<usize> = sdp
        .constraints
        .iter()
        .enumerate()
        .filter(|(_, c)| c.rel == Relation::Le)
        .map(|(i, _)| i)
        .collect();
    let m_in = ineq_rows.len();

    let mut blocks: Vec<i64> = vec![sdp.gram_dim as i64];
    let slack_block = if m_in > 0 {
        blocks.push(-(m_in as i64));
        Some(blocks.len())
    } else {
        None
    };
    let free_block = if q > 0 {
        blocks.push(-(2 * q as i64));
        Some(blocks.len())
    } else {
        None
    };

    writeln!(w, "{m}")?;
    writeln!(w, "{}", blocks.len())?;
    writeln!(
        w,
        "{}",
        blocks.iter().map(|b| b.to_string()).collect::<Vec<_>>().join(" ")
    )?;
    writeln!(
        w,
        "{}",
        sdp.constraints
            .iter()
            .map(|c| format!("{}", c.rhs))
            .collect::<Vec<_>>()
            .join(" ")
    )?;

    let mut entries = Vec::new();
    push_block_entries(&mut entries, 0, 1, &sdp.objective_gram);
    if let Some(fb) = free_block {
        push_free_entries(&mut entries, 0, fb, &sdp.objective_free);
    }
    for (idx, c) in sdp.constraints.iter().enumerate() {
        let mat = idx + 1;
        push_block_entries(&mut entries, mat, 1, &c.gram);
        if c.rel == Relation::Le {
            let slot = ineq_rows.iter().position(|&r| r == idx).unwrap() + 1;
            entries.push(Entry {
                mat,
                block: slack_block.unwrap(),
                i: slot,
                j: slot,
                value: 1.0,
            });
        }
        if let Some(fb) = free_block {
            push_free_entries(&mut entries, mat, fb, &c.free);
        }
    }
    entries.sort_by(|a, b| {
        (a.mat, a.block, a.i, a.j).cmp(&(b.mat, b.block, b.i, b.j))
    });
    for e in &entries {
        writeln!(w, "{} {} {} {} {}", e.mat, e.block, e.i, e.j, e.value)?;
    }
    Ok(())
}

/// Reads a file produced by [`export_sdpa`] back into an [`SdpProblem`].
pub fn read_sdpa<R: BufRead>(r: &mut R) -> Result<SdpProblem> {
    let mut lines = Vec::new();
    for line in r.lines() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('"') || trimmed.starts_with('*') {
            continue;
        }
        lines.push(trimmed.to_string());
    }
    if lines.len() < 4 {
        return Err(Error::invalid("sdpa: file too short"));
    }
    let m: usize = lines[0]
        .split_whitespace()
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::invalid("sdpa: bad constraint count"))?;
    let nblocks: usize = lines[1]
        .split_whitespace()
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| Error::invalid("sdpa: bad block count"))?;
    let sizes: Vec<i64> = lines[2]
        .split_whitespace()
        .map(|t| {
            // some writers use parenthesized size lists; ours does not
            t.trim_matches(|c| c == '(' || c == ')' || c == ',')
                .parse()
                .map_err(|_| Error::invalid(format!("sdpa: bad block size `{t}`")))
        })
        .collect::<Result<_>>()?;
    if sizes.len() != nblocks {
        return Err(Error::invalid("sdpa: block size list length mismatch"));
    }
    if sizes.is_empty() || sizes[0] <= 0 {
        return Err(Error::invalid("sdpa: first block must be the dense Gram block"));
    }
    let rhs: Vec<f64> = lines[3]
        .split_whitespace()
        .map(|t| t.parse().map_err(|_| Error::invalid(format!("sdpa: bad rhs `{t}`"))))
        .collect::<Result<_>>()?;
    if rhs.len() != m {
        return Err(Error::invalid("sdpa: rhs length mismatch"));
    }

    struct Raw {
        mat: usize,
        block: usize,
        i: usize,
        j: usize,
        value: f64,
    }
    let mut raw = Vec::new();
    for line in &lines[4..] {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks.len() != 5 {
            return Err(Error::invalid(format!("sdpa: bad entry line `{line}`")));
        }
        raw.push(Raw {
            mat: toks[0].parse().map_err(|_| Error::invalid("sdpa: bad entry"))?,
            block: toks[1].parse().map_err(|_| Error::invalid("sdpa: bad entry"))?,
            i: toks[2].parse().map_err(|_| Error::invalid("sdpa: bad entry"))?,
            j: toks[3].parse().map_err(|_| Error::invalid("sdpa: bad entry"))?,
            value: toks[4].parse().map_err(|_| Error::invalid("sdpa: bad entry"))?,
        });
    }

    // identify the slack and free blocks among the diagonal tails
    let gram_dim = sizes[0] as usize;
    let (slack_block, free_block) = match nblocks {
        1 => (None, None),
        2 => {
            // free-split blocks pair every entry at (2j−1, 2j−1)/(2j, 2j)
            // with opposite values; slack blocks carry one unit entry per row
            let blk = 2usize;
            let entries: Vec<&Raw> = raw.iter().filter(|e| e.block == blk).collect();
            let size = (-sizes[1]) as usize;
            let looks_free = size % 2 == 0
                && entries.iter().all(|e| e.i == e.j)
                && (0..m + 1).all(|mat| {
                    let mine: Vec<&&Raw> = entries.iter().filter(|e| e.mat == mat).collect();
                    mine.iter().all(|e| {
                        let pair = if e.i % 2 == 1 { e.i + 1 } else { e.i - 1 };
                        mine.iter().any(|o| o.i == pair && (o.value + e.value).abs() == 0.0)
                    })
                });
            if looks_free {
                (None, Some(blk))
            } else {
                (Some(blk), None)
            }
        }
        3 => (Some(2), Some(3)),
        _ => return Err(Error::invalid("sdpa: unsupported block layout")),
    };
    let num_free = free_block.map(|b| (-sizes[b - 1]) as usize / 2).unwrap_or(0);

    let mut objective_gram = SymMatrix::zeros(gram_dim)?;
    let mut objective_free = vec![0.0; num_free];
    let mut grams: Vec<SymMatrix> = (0..m)
        .map(|_| SymMatrix::zeros(gram_dim))
        .collect::<Result<_>>()?;
    let mut frees: Vec<Vec<f64>> = vec![vec![0.0; num_free]; m];
    let mut is_ineq = vec![false; m];

    for e in &raw {
        if e.block == 1 {
            if e.i > gram_dim || e.j > gram_dim {
                return Err(Error::invalid("sdpa: gram entry out of range"));
            }
            if e.mat == 0 {
                objective_gram.set(e.i - 1, e.j - 1, e.value);
            } else {
                grams[e.mat - 1].set(e.i - 1, e.j - 1, e.value);
            }
        } else if Some(e.block) == slack_block {
            if e.mat == 0 {
                return Err(Error::invalid("sdpa: objective touches the slack block"));
            }
            if e.i != e.j || e.value != 1.0 {
                return Err(Error::invalid("sdpa: malformed slack entry"));
            }
            is_ineq[e.mat - 1] = true;
        } else if Some(e.block) == free_block {
            if e.i != e.j {
                return Err(Error::invalid("sdpa: free block entry off the diagonal"));
            }
            // only the u⁺ slot carries the coefficient; the paired −v slot is
            // implied and checked
            if e.i % 2 == 1 {
                let idx = (e.i - 1) / 2;
                if e.mat == 0 {
                    objective_free[idx] = e.value;
                } else {
                    frees[e.mat - 1][idx] = e.value;
                }
            }
        } else {
            return Err(Error::invalid(format!("sdpa: entry in unknown block {}", e.block)));
        }
    }

    let constraints = grams
        .into_iter()
        .zip(frees)
        .zip(is_ineq.iter().zip(&rhs))
        .map(|((gram, free), (&ineq, &rhs))| SdpConstraint {
            gram,
            free,
            rel: if ineq { Relation::Le } else { Relation::Eq },
            rhs,
        })
        .collect();

    Ok(SdpProblem {
        gram_dim,
        num_free,
        objective_gram,
        objective_free,
        constraints,
        column_labels: (0..gram_dim).map(|i| format!("col{i}")).collect(),
        free_labels: (0..num_free).map(|i| format!("val{i}")).collect(),
    })
}
