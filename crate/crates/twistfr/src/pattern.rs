//! Gluing patterns with outer-automorphism labels: parsing, validation,
//! classification of edge pairs into the six interleaving classes, ribbon
//! boundary tracing and surface-invariant recovery.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PatternError {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("edge index {0} out of range (n = {1})")]
    EdgeOutOfRange(usize, usize),
}

/// A bijection `P: {1,1',...,n,n'} -> {1,...,2n}` with `P(i) < P(i')`,
/// stored as `start[i] = P(i)` and `end[i] = P(i')` (1-based values).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingPattern {
    pub n: usize,
    pub start: Vec<usize>,
    pub end: Vec<usize>,
}

/// Out-label vocabulary for the A-series: the trivial automorphism and the
/// order-two diagram flip.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum OutLabel {
    Id,
    Flip,
}

impl OutLabel {
    pub fn mul(self, other: OutLabel) -> OutLabel {
        if self == other {
            OutLabel::Id
        } else {
            OutLabel::Flip
        }
    }

    pub fn inverse(self) -> OutLabel {
        self
    }
}

impl fmt::Display for OutLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OutLabel::Id => write!(f, "id"),
            OutLabel::Flip => write!(f, "flip"),
        }
    }
}

/// A gluing pattern together with one Out-label per edge and an optional
/// Dynkin type tag fixing the label vocabulary / target algebra.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DecoratedPattern {
    pub pattern: GluingPattern,
    pub labels: Vec<OutLabel>,
    /// e.g. `A2`; `None` when the file does not carry a `D =` line.
    pub dynkin_tag: Option<String>,
}

/// The six interleaving classes of an ordered edge pair `i < j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum PairClass {
    PosLinked,
    NegLinked,
    PosNested,
    NegNested,
    PosUnlinked,
    NegUnlinked,
}

impl fmt::Display for PairClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            PairClass::PosLinked => "positively linked",
            PairClass::NegLinked => "negatively linked",
            PairClass::PosNested => "positively nested",
            PairClass::NegNested => "negatively nested",
            PairClass::PosUnlinked => "positively unlinked",
            PairClass::NegUnlinked => "negatively unlinked",
        };
        write!(f, "{s}")
    }
}

impl GluingPattern {
    /// Validates bijectivity and the `P(i) < P(i')` constraint.
    pub fn new(start: Vec<usize>, end: Vec<usize>) -> Result<Self, String> {
        let n = start.len();
        if end.len() != n {
            return Err("start/end length mismatch".into());
        }
        let mut seen = vec![false; 2 * n + 1];
        for i in 0..n {
            for v in [start[i], end[i]] {
                if v < 1 || v > 2 * n {
                    return Err(format!("P value {v} outside 1..{}", 2 * n));
                }
                if seen[v] {
                    return Err(format!("P value {v} repeated; P must be a bijection"));
                }
                seen[v] = true;
            }
            if start[i] >= end[i] {
                return Err(format!(
                    "P({}) = {} must be smaller than P({}') = {}",
                    i + 1,
                    start[i],
                    i + 1,
                    end[i]
                ));
            }
        }
        Ok(GluingPattern { n, start, end })
    }

    /// All valid patterns on `n` edges (used by exhaustive tests and suites).
    pub fn enumerate(n: usize) -> Vec<GluingPattern> {
        let mut out = Vec::new();
        let mut positions: Vec<usize> = (1..=2 * n).collect();
        enumerate_pairings(&mut positions, &mut Vec::new(), &mut out, n);
        out
    }
}

fn enumerate_pairings(
    free: &mut Vec<usize>,
    acc: &mut Vec<(usize, usize)>,
    out: &mut Vec<GluingPattern>,
    n: usize,
) {
    if acc.len() == n {
        let start = acc.iter().map(|&(s, _)| s).collect();
        let end = acc.iter().map(|&(_, e)| e).collect();
        out.push(GluingPattern::new(start, end).expect("enumerated pattern is valid"));
        return;
    }
    // fix the smallest free position as the next edge's start to avoid
    // producing the same pairing twice in different edge orders -- but edge
    // ORDER matters for patterns, so we instead pick every ordered pair.
    let snapshot = free.clone();
    for (ai, &a) in snapshot.iter().enumerate() {
        for &b in snapshot.iter().skip(ai + 1) {
            free.retain(|&x| x != a && x != b);
            acc.push((a, b));
            enumerate_pairings(free, acc, out, n);
            acc.pop();
            *free = snapshot.clone();
        }
    }
}

/// Classifies the ordered pair `i < j` (0-based edge indices) by the six
/// interval interleavings.
pub fn classify_pair(p: &GluingPattern, i: usize, j: usize) -> Result<PairClass, PatternError> {
    if i >= p.n {
        return Err(PatternError::EdgeOutOfRange(i, p.n));
    }
    if j >= p.n || i >= j {
        return Err(PatternError::EdgeOutOfRange(j, p.n));
    }
    let (a, b) = (p.start[i], p.end[i]);
    let (c, d) = (p.start[j], p.end[j]);
    let class = if a < c && c < b && b < d {
        PairClass::PosLinked
    } else if c < a && a < d && d < b {
        PairClass::NegLinked
    } else if a < c && d < b {
        PairClass::PosNested
    } else if c < a && b < d {
        PairClass::NegNested
    } else if b < c {
        PairClass::PosUnlinked
    } else {
        debug_assert!(d < a);
        PairClass::NegUnlinked
    };
    Ok(class)
}

/// Ribbon-graph boundary data: one vertex whose 2n attachment intervals sit
/// in cyclic order 1..2n (cilium between 2n and 1), each edge an untwisted
/// band joining intervals `P(i)` and `P(i')`.
fn face_cycles(p: &GluingPattern) -> Vec<Vec<usize>> {
    let two_n = 2 * p.n;
    // partner[pos] = the other foot of the band attached at pos (1-based)
    let mut partner = vec![0usize; two_n + 1];
    for i in 0..p.n {
        partner[p.start[i]] = p.end[i];
        partner[p.end[i]] = p.start[i];
    }
    let sigma = |pos: usize| pos % two_n + 1;
    let mut visited = vec![false; two_n + 1];
    let mut cycles = Vec::new();
    for s in 1..=two_n {
        if visited[s] {
            continue;
        }
        let mut cycle = Vec::new();
        let mut pos = s;
        loop {
            visited[pos] = true;
            cycle.push(pos);
            pos = sigma(partner[pos]);
            if pos == s {
                break;
            }
        }
        cycles.push(cycle);
    }
    cycles
}

/// `(genus, boundary_count)` from boundary tracing; always satisfies
/// `n = 2g + r - 1`.
pub fn surface_invariants(p: &GluingPattern) -> (usize, usize) {
    let r = face_cycles(p).len();
    let n = p.n;
    debug_assert!((n + 1).wrapping_sub(r) % 2 == 0, "handshake parity");
    let g = (n + 1 - r) / 2;
    (g, r)
}

/// One letter of a boundary word: generator index and exponent sign.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Letter {
    pub edge: usize,
    pub positive: bool,
}

/// A boundary word together with its accumulated Out-holonomy.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryWord {
    pub letters: Vec<Letter>,
    pub holonomy: OutLabel,
}

impl BoundaryWord {
    pub fn render(&self) -> String {
        if self.letters.is_empty() {
            return "1".into();
        }
        self.letters
            .iter()
            .map(|l| {
                if l.positive {
                    format!("g{}", l.edge + 1)
                } else {
                    format!("g{}^-1", l.edge + 1)
                }
            })
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Boundary words read off the ribbon boundary trace, one per component.
///
/// The edge is oriented to leave the vertex through the interval `P(i')` and
/// return through `P(i)`; traversing the band from `P(i')` to `P(i)` records
/// `g_i`, the reverse records `g_i^{-1}`.
pub fn boundary_words(d: &DecoratedPattern) -> Vec<BoundaryWord> {
    let p = &d.pattern;
    let mut out = Vec::new();
    for cycle in face_cycles(p) {
        let mut letters = Vec::new();
        let mut holonomy = OutLabel::Id;
        for pos in cycle {
            let edge = (0..p.n)
                .find(|&i| p.start[i] == pos || p.end[i] == pos)
                .expect("every interval carries a band foot");
            let positive = p.end[edge] == pos;
            letters.push(Letter { edge, positive });
            let label = d.labels[edge];
            holonomy = holonomy.mul(if positive { label } else { label.inverse() });
        }
        out.push(BoundaryWord { letters, holonomy });
    }
    out
}

/// Parses the pattern file format: one `key = value` assignment per line,
/// `#` comments, keys `n`, `P`, `D` (optional) and `labels`.
pub fn parse_pattern(text: &str) -> Result<DecoratedPattern, PatternError> {
    let mut n: Option<(usize, usize)> = None; // (value, line)
    let mut p_values: Option<(Vec<usize>, usize)> = None;
    let mut labels: Option<(Vec<OutLabel>, usize)> = None;
    let mut dynkin_tag = None;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line.split_once('=').ok_or_else(|| PatternError::Parse {
            line: line_no,
            msg: "expected `key = value`".into(),
        })?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "n" => {
                let v = value.parse::<usize>().map_err(|_| PatternError::Parse {
                    line: line_no,
                    msg: format!("invalid edge count `{value}`"),
                })?;
                n = Some((v, line_no));
            }
            "P" => {
                let mut vs = Vec::new();
                for tok in value.split_whitespace() {
                    let v = tok.parse::<usize>().map_err(|_| PatternError::Parse {
                        line: line_no,
                        msg: format!("invalid P entry `{tok}`"),
                    })?;
                    vs.push(v);
                }
                p_values = Some((vs, line_no));
            }
            "D" => {
                dynkin_tag = Some(value.to_string());
            }
            "labels" => {
                let mut ls = Vec::new();
                for tok in value.split_whitespace() {
                    let l = match tok {
                        "id" => OutLabel::Id,
                        "flip" => OutLabel::Flip,
                        _ => {
                            return Err(PatternError::Parse {
                                line: line_no,
                                msg: format!("unknown label token `{tok}`"),
                            })
                        }
                    };
                    ls.push(l);
                }
                labels = Some((ls, line_no));
            }
            _ => {
                return Err(PatternError::Parse {
                    line: line_no,
                    msg: format!("unknown key `{key}`"),
                })
            }
        }
    }

    let (n, n_line) = n.ok_or(PatternError::Parse {
        line: 1,
        msg: "missing `n = <edges>`".into(),
    })?;
    let (pv, p_line) = p_values.ok_or(PatternError::Parse {
        line: n_line,
        msg: "missing `P = ...`".into(),
    })?;
    if pv.len() != 2 * n {
        return Err(PatternError::Parse {
            line: p_line,
            msg: format!("P must list {} values, found {}", 2 * n, pv.len()),
        });
    }
    let start: Vec<usize> = (0..n).map(|i| pv[2 * i]).collect();
    let end: Vec<usize> = (0..n).map(|i| pv[2 * i + 1]).collect();
    let pattern = GluingPattern::new(start, end).map_err(|msg| PatternError::Parse {
        line: p_line,
        msg,
    })?;
    let (labels, l_line) = labels.ok_or(PatternError::Parse {
        line: p_line,
        msg: "missing `labels = ...`".into(),
    })?;
    if labels.len() != n {
        return Err(PatternError::Parse {
            line: l_line,
            msg: format!("expected {} labels, found {}", n, labels.len()),
        });
    }
    Ok(DecoratedPattern {
        pattern,
        labels,
        dynkin_tag,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pat(values: &[usize]) -> GluingPattern {
        let n = values.len() / 2;
        let start = (0..n).map(|i| values[2 * i]).collect();
        let end = (0..n).map(|i| values[2 * i + 1]).collect();
        GluingPattern::new(start, end).unwrap()
    }

    #[test]
    fn parse_round_trip() {
        let d = parse_pattern("n = 2\nP = 1 3 2 4\nD = A2\nlabels = flip id\n").unwrap();
        assert_eq!(d.pattern.start, vec![1, 2]);
        assert_eq!(d.pattern.end, vec![3, 4]);
        assert_eq!(d.labels, vec![OutLabel::Flip, OutLabel::Id]);
        assert_eq!(d.dynkin_tag.as_deref(), Some("A2"));
    }

    #[test]
    fn parse_three_punctured_sphere() {
        let d = parse_pattern("n=2\nP=1 2 3 4\nlabels=id id").unwrap();
        assert_eq!(surface_invariants(&d.pattern), (0, 3));
    }

    #[test]
    fn parse_rejects_descending_edge() {
        let err = parse_pattern("n=1\nP=2 1\nlabels=id").unwrap_err();
        match err {
            PatternError::Parse { line, msg } => {
                assert_eq!(line, 2);
                assert!(msg.contains("must be smaller"), "{msg}");
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn parse_rejects_non_bijection_and_bad_labels() {
        assert!(parse_pattern("n=2\nP=1 3 3 4\nlabels=id id").is_err());
        assert!(parse_pattern("n=1\nP=1 2\nlabels=spin").is_err());
        assert!(parse_pattern("n=2\nP=1 2 3 4\nlabels=id").is_err());
    }

    #[test]
    fn classification_examples() {
        assert_eq!(
            classify_pair(&pat(&[1, 2, 3, 4]), 0, 1).unwrap(),
            PairClass::PosUnlinked
        );
        assert_eq!(
            classify_pair(&pat(&[1, 3, 2, 4]), 0, 1).unwrap(),
            PairClass::PosLinked
        );
        assert_eq!(
            classify_pair(&pat(&[1, 4, 2, 3]), 0, 1).unwrap(),
            PairClass::PosNested
        );
        assert_eq!(
            classify_pair(&pat(&[2, 4, 1, 3]), 0, 1).unwrap(),
            PairClass::NegLinked
        );
        assert_eq!(
            classify_pair(&pat(&[2, 3, 1, 4]), 0, 1).unwrap(),
            PairClass::NegNested
        );
        assert_eq!(
            classify_pair(&pat(&[3, 4, 1, 2]), 0, 1).unwrap(),
            PairClass::NegUnlinked
        );
    }

    #[test]
    fn classification_is_total_up_to_n4() {
        for n in 2..=4 {
            for p in GluingPattern::enumerate(n) {
                for i in 0..n {
                    for j in i + 1..n {
                        classify_pair(&p, i, j).unwrap();
                    }
                }
            }
        }
    }

    #[test]
    fn reversal_swaps_sign() {
        // swapping the two edges of a pattern exchanges Pos and Neg classes
        use PairClass::*;
        let swap = |vals: &[usize]| pat(&[vals[2], vals[3], vals[0], vals[1]]);
        for (vals, class, swapped) in [
            (&[1usize, 2, 3, 4][..], PosUnlinked, NegUnlinked),
            (&[1, 3, 2, 4][..], PosLinked, NegLinked),
            (&[1, 4, 2, 3][..], PosNested, NegNested),
        ] {
            assert_eq!(classify_pair(&pat(vals), 0, 1).unwrap(), class);
            assert_eq!(classify_pair(&swap(vals), 0, 1).unwrap(), swapped);
        }
    }

    #[test]
    fn surface_invariant_examples() {
        assert_eq!(surface_invariants(&pat(&[1, 2, 3, 4])), (0, 3));
        assert_eq!(surface_invariants(&pat(&[1, 3, 2, 4])), (1, 1));
        assert_eq!(surface_invariants(&pat(&[1, 4, 2, 3])), (0, 3));
    }

    #[test]
    fn euler_relation_up_to_n5() {
        for n in 1..=5 {
            for p in GluingPattern::enumerate(n) {
                let (g, r) = surface_invariants(&p);
                assert_eq!(n, 2 * g + r - 1, "pattern {:?}/{:?}", p.start, p.end);
            }
        }
    }

    #[test]
    fn enumerate_counts() {
        // (2n)! / 2^n ordered pairings with start < end
        assert_eq!(GluingPattern::enumerate(1).len(), 1);
        assert_eq!(GluingPattern::enumerate(2).len(), 6);
        assert_eq!(GluingPattern::enumerate(3).len(), 90);
    }

    #[test]
    fn boundary_words_torus() {
        let d = DecoratedPattern {
            pattern: pat(&[1, 3, 2, 4]),
            labels: vec![OutLabel::Id, OutLabel::Id],
            dynkin_tag: None,
        };
        let words = boundary_words(&d);
        assert_eq!(words.len(), 1);
        let w = &words[0];
        assert_eq!(w.holonomy, OutLabel::Id);
        // the genus-one relator: each generator appears once with each sign
        assert_eq!(w.letters.len(), 4);
        for edge in 0..2 {
            for positive in [true, false] {
                assert_eq!(
                    w.letters
                        .iter()
                        .filter(|l| l.edge == edge && l.positive == positive)
                        .count(),
                    1
                );
            }
        }
        // adjacent letters alternate between the two generators
        for k in 0..4 {
            assert_ne!(w.letters[k].edge, w.letters[(k + 1) % 4].edge);
        }
    }

    #[test]
    fn boundary_words_sphere_with_flip() {
        let d = DecoratedPattern {
            pattern: pat(&[1, 2, 3, 4]),
            labels: vec![OutLabel::Flip, OutLabel::Id],
            dynkin_tag: None,
        };
        let words = boundary_words(&d);
        assert_eq!(words.len(), 3);
        let mut hols: Vec<OutLabel> = words.iter().map(|w| w.holonomy).collect();
        hols.sort_by_key(|h| *h == OutLabel::Flip);
        assert_eq!(hols, vec![OutLabel::Id, OutLabel::Flip, OutLabel::Flip]);
    }

    #[test]
    fn boundary_words_annulus() {
        let d = DecoratedPattern {
            pattern: pat(&[1, 2]),
            labels: vec![OutLabel::Flip],
            dynkin_tag: None,
        };
        let words = boundary_words(&d);
        assert_eq!(words.len(), 2);
        for w in &words {
            assert_eq!(w.holonomy, OutLabel::Flip);
            assert_eq!(w.letters.len(), 1);
        }
    }

    #[test]
    fn all_id_labels_give_id_holonomy() {
        for n in 1..=4 {
            for p in GluingPattern::enumerate(n) {
                let d = DecoratedPattern {
                    pattern: p,
                    labels: vec![OutLabel::Id; n],
                    dynkin_tag: None,
                };
                for w in boundary_words(&d) {
                    assert_eq!(w.holonomy, OutLabel::Id);
                }
            }
        }
    }
}
