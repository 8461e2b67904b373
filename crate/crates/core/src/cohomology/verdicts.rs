use std::collections::BTreeSet;

use super::DeRham;
use crate::model::ClosednessProfile;
use crate::report::Verdict;
use crate::spectral::SpectralSequence;

/// Page-2 claims selected by the closedness profile: exact `Ω`
/// (`t_min = 1`), the general bound for `1 < t_min ≤ n`, and the
/// closed-type case.
pub fn stabilization_verdicts(
    ss: &SpectralSequence<'_>,
    de_rham: &DeRham,
    profile: &ClosednessProfile,
) -> Vec<Verdict> {
    let n = ss.ops().model().half_dim() as isize;
    let stab = ss.stabilization();
    let s = stab.page;
    let e2 = ss.page(2).expect("page 2 is always computed");
    let mut out = Vec::new();
    match profile.t_min {
        Some(1) => {
            out.push(page_at_most_two("Theorem 2: stabilization page ≤ 2", s));
            let stray: Vec<String> = e2
                .dims()
                .into_keys()
                .filter(|&(p, q)| p != 0 && q != n)
                .map(|(p, q)| format!("({p},{q})"))
                .collect();
            out.push(Verdict::new(
                "Theorem 2: E_2 supported on p = 0 or q = n",
                (!stray.is_empty()).then(|| format!("nonzero at {}", stray.join(", "))),
            ));
            let bad: Vec<String> = (0..=n)
                .filter(|&q| e2.dim(0, q) != de_rham.dim(q))
                .map(|q| format!("q={q}: {} vs {}", e2.dim(0, q), de_rham.dim(q)))
                .collect();
            out.push(Verdict::new(
                "Theorem 2: dim E_2^{0,q} = dim H^q",
                (!bad.is_empty()).then(|| bad.join("; ")),
            ));
            let bad: Vec<String> = (0..=n)
                .filter(|&p| e2.dim(p, n) != de_rham.dim(n + p))
                .map(|p| format!("p={p}: {} vs {}", e2.dim(p, n), de_rham.dim(n + p)))
                .collect();
            out.push(Verdict::new(
                "Theorem 2: dim E_2^{p,n} = dim H^{n+p}",
                (!bad.is_empty()).then(|| bad.join("; ")),
            ));
        }
        Some(t) => {
            let admissible = theorem3_pages(t, n as usize);
            let list: Vec<String> = admissible.iter().map(usize::to_string).collect();
            let detail = format!("observed page {s}; admissible {{{}}}", list.join(", "));
            out.push(if admissible.contains(&s) {
                Verdict::note("Theorem 3: stabilization page in window", detail)
            } else {
                Verdict::fail("Theorem 3: stabilization page in window", detail)
            });
        }
        None => {
            out.push(page_at_most_two("Theorem 4: stabilization page ≤ 2", s));
            let bad: Vec<String> = (0..=n)
                .filter(|&p| e2.dim(p, p) != 1)
                .map(|p| format!("dim E_2^{{{p},{p}}} = {}", e2.dim(p, p)))
                .collect();
            out.push(Verdict::new(
                "Theorem 4: dim E_2^{p,p} = 1",
                (!bad.is_empty()).then(|| bad.join("; ")),
            ));
        }
    }
    out
}

/// `{t - r + 1 : 0 ≤ r ≤ max(0, 2t - (n + 1))}`.
pub fn theorem3_pages(t: usize, n: usize) -> BTreeSet<usize> {
    let r_max = (2 * t).saturating_sub(n + 1);
    (0..=r_max)
        .filter(|&r| r <= t + 1)
        .map(|r| t + 1 - r)
        .collect()
}

fn page_at_most_two(name: &str, s: usize) -> Verdict {
    Verdict::new(name, (s > 2).then(|| format!("stabilizes at page {s}")))
}

/// Antidiagonal sums at the stabilization page against the Betti numbers.
pub fn convergence_verdict(ss: &SpectralSequence<'_>, de_rham: &DeRham) -> Verdict {
    let s = ss.stabilization().page;
    let page = ss.page(s).expect("stabilization page is computed");
    let m = ss.ops().model().dim() as isize;
    let bad: Vec<String> = (0..=m)
        .filter_map(|k| {
            let total: usize = page
                .entries()
                .filter(|e| e.p + e.q == k)
                .map(|e| e.dim())
                .sum();
            (total != de_rham.dim(k)).then(|| format!("k={k}: {total} vs {}", de_rham.dim(k)))
        })
        .collect();
    Verdict::new(
        "convergence: antidiagonal sums of E_s equal Betti numbers",
        (!bad.is_empty()).then(|| bad.join("; ")),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::builtin;
    use crate::ops::OperatorSet;

    #[test]
    fn admissible_pages() {
        assert_eq!(theorem3_pages(2, 2), [2, 3].into());
        assert_eq!(theorem3_pages(2, 3), [3].into());
        assert_eq!(theorem3_pages(3, 3), [2, 3, 4].into());
    }

    #[test]
    fn verdicts_pass_on_builtins() {
        for name in ["t2", "t4", "kt4", "solv2", "solv4"] {
            let model = builtin(name).unwrap();
            let ops = OperatorSet::new(&model).unwrap();
            let h = DeRham::new(&model).unwrap();
            let ss = SpectralSequence::new(&ops).unwrap();
            for v in stabilization_verdicts(&ss, &h, &model.closedness_profile()) {
                assert!(v.pass, "{name}: {v:?}");
            }
            assert!(convergence_verdict(&ss, &h).pass, "{name}");
        }
    }

    #[test]
    fn solv2_pattern() {
        let model = builtin("solv2").unwrap();
        let ops = OperatorSet::new(&model).unwrap();
        let ss = SpectralSequence::new(&ops).unwrap();
        let e2 = ss.page(2).unwrap();
        assert_eq!((e2.dim(0, 0), e2.dim(0, 1), e2.dim(1, 1)), (1, 1, 0));
    }
}
