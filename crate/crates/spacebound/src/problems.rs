//! Communication problems as plain data: INDEX, pointer chasing, set
//! chasing, and set-chasing intersection, with brute-force referees and
//! seeded instance generators.
//!
//! Element labels inside tables are 1-based. Conversion to 0-based node
//! ids happens only in the reductions module.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::{Error, Result};

/// Alice's bit array plus Bob's index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexInstance {
    pub bits: Vec<bool>,
    pub index: usize,
}

impl IndexInstance {
    pub fn new(bits: Vec<bool>, index: usize) -> Result<Self> {
        if bits.is_empty() {
            return Err(Error::InvalidArgument("empty bit array".into()));
        }
        if index >= bits.len() {
            return Err(Error::InvalidArgument(format!(
                "index {index} out of range for {} bits",
                bits.len()
            )));
        }
        Ok(IndexInstance { bits, index })
    }

    pub fn len(&self) -> usize {
        self.bits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.is_empty()
    }

    /// The queried bit; what a protocol for INDEX must output.
    pub fn queried_bit(&self) -> bool {
        self.bits[self.index]
    }

    /// Node count `n` such that the array encodes the upper triangle of an
    /// n-node graph, i.e. `len == n(n-1)/2`.
    pub fn graph_nodes(&self) -> Result<usize> {
        let big_n = self.len();
        let mut n = 2usize;
        while n * (n - 1) / 2 < big_n {
            n += 1;
        }
        if n * (n - 1) / 2 != big_n {
            return Err(Error::InvalidArgument(format!(
                "bit array length {big_n} is not n(n-1)/2 for any n"
            )));
        }
        Ok(n)
    }
}

/// The `k`-th pair `(a, b)` with `a < b` over `[0, n)` in lexicographic
/// order.
pub fn pair_of_index(n: usize, k: usize) -> (usize, usize) {
    let mut k = k;
    for a in 0..n {
        let row = n - a - 1;
        if k < row {
            return (a, a + 1 + k);
        }
        k -= row;
    }
    panic!("pair index out of range");
}

/// Inverse of [`pair_of_index`].
pub fn index_of_pair(n: usize, a: usize, b: usize) -> usize {
    assert!(a < b && b < n);
    a * n - a * (a + 1) / 2 + (b - a - 1)
}

/// A total function `[m] -> [m]`, stored as a 1-based image table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionTable {
    m: usize,
    img: Vec<usize>,
}

impl FunctionTable {
    pub fn new(m: usize, img: Vec<usize>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("domain size must be >= 1".into()));
        }
        if img.len() != m {
            return Err(Error::InvalidArgument(format!(
                "image table has {} entries for domain size {m}",
                img.len()
            )));
        }
        if let Some(bad) = img.iter().find(|&&y| y == 0 || y > m) {
            return Err(Error::InvalidArgument(format!(
                "image value {bad} outside [1, {m}]"
            )));
        }
        Ok(FunctionTable { m, img })
    }

    pub fn identity(m: usize) -> Self {
        FunctionTable {
            m,
            img: (1..=m).collect(),
        }
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `f(x)` for 1-based `x`.
    pub fn apply(&self, x: usize) -> usize {
        self.img[x - 1]
    }
}

/// A set-valued function `[m] -> 2^[m]`. Empty image sets are permitted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetFunctionTable {
    m: usize,
    img: Vec<BTreeSet<usize>>,
}

impl SetFunctionTable {
    pub fn new(m: usize, img: Vec<BTreeSet<usize>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::InvalidArgument("domain size must be >= 1".into()));
        }
        if img.len() != m {
            return Err(Error::InvalidArgument(format!(
                "image table has {} entries for domain size {m}",
                img.len()
            )));
        }
        for set in &img {
            if let Some(bad) = set.iter().find(|&&y| y == 0 || y > m) {
                return Err(Error::InvalidArgument(format!(
                    "image value {bad} outside [1, {m}]"
                )));
            }
        }
        Ok(SetFunctionTable { m, img })
    }

    /// Singleton table wrapping a plain function.
    pub fn from_function(f: &FunctionTable) -> Self {
        SetFunctionTable {
            m: f.m,
            img: f.img.iter().map(|&y| BTreeSet::from([y])).collect(),
        }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_function(&FunctionTable::identity(m))
    }

    pub fn m(&self) -> usize {
        self.m
    }

    /// `f(x)` for 1-based `x`.
    pub fn apply(&self, x: usize) -> &BTreeSet<usize> {
        &self.img[x - 1]
    }
}

/// A pointer chasing instance: `q` players, each holding one function
/// table over a shared domain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PcInstance {
    pub tables: Vec<FunctionTable>,
}

impl PcInstance {
    pub fn new(tables: Vec<FunctionTable>) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::InvalidArgument("need at least one player".into()));
        }
        let m = tables[0].m;
        if tables.iter().any(|t| t.m != m) {
            return Err(Error::InvalidArgument(
                "all tables must share the domain size".into(),
            ));
        }
        Ok(PcInstance { tables })
    }

    pub fn q(&self) -> usize {
        self.tables.len()
    }

    pub fn m(&self) -> usize {
        self.tables[0].m
    }
}

/// Two set-chasing instances whose outputs are tested for intersection.
/// `side_a[0]` is the outermost function of side A, matching the player
/// speaking order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectInstance {
    pub side_a: Vec<SetFunctionTable>,
    pub side_b: Vec<SetFunctionTable>,
}

impl IntersectInstance {
    pub fn new(side_a: Vec<SetFunctionTable>, side_b: Vec<SetFunctionTable>) -> Result<Self> {
        if side_a.len() != side_b.len() {
            return Err(Error::InvalidArgument(
                "both sides must have the same player count".into(),
            ));
        }
        if side_a.len() < 2 {
            return Err(Error::InvalidArgument(
                "need at least two players per side".into(),
            ));
        }
        let m = side_a[0].m;
        if side_a.iter().chain(&side_b).any(|t| t.m != m) {
            return Err(Error::InvalidArgument(
                "all tables must share the domain size".into(),
            ));
        }
        Ok(IntersectInstance { side_a, side_b })
    }

    pub fn q(&self) -> usize {
        self.side_a.len()
    }

    pub fn m(&self) -> usize {
        self.side_a[0].m
    }
}

/// Innermost-first composition applied to 1:
/// `f_1(f_2(...f_q(1)...))`.
pub fn eval_pointer_chase(inst: &PcInstance) -> usize {
    let mut x = 1usize;
    for table in inst.tables.iter().rev() {
        x = table.apply(x);
    }
    x
}

/// Set-chasing referee: start from `{1}`, apply the lifted
/// union-of-images map innermost-first.
pub fn eval_set_chase(tables: &[SetFunctionTable]) -> BTreeSet<usize> {
    let mut current = BTreeSet::from([1usize]);
    for table in tables.iter().rev() {
        let mut next = BTreeSet::new();
        for &x in &current {
            next.extend(table.apply(x).iter().copied());
        }
        current = next;
    }
    current
}

/// True iff the two set-chasing outputs intersect.
pub fn eval_intersect(inst: &IntersectInstance) -> bool {
    let out_a = eval_set_chase(&inst.side_a);
    let out_b = eval_set_chase(&inst.side_b);
    out_a.intersection(&out_b).next().is_some()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum InstanceKind {
    Pc,
    Intersect,
    Index,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Instance {
    Pc(PcInstance),
    Intersect(IntersectInstance),
    Index(IndexInstance),
}

/// Seeded pointer-chasing instance with uniform random tables.
pub fn gen_pc(m: usize, q: usize, seed: u64) -> Result<PcInstance> {
    if m == 0 || q == 0 {
        return Err(Error::InvalidArgument("m and q must be >= 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let tables = (0..q)
        .map(|_| {
            let img = (0..m).map(|_| rng.random_range(1..=m)).collect();
            FunctionTable::new(m, img)
        })
        .collect::<Result<Vec<_>>>()?;
    PcInstance::new(tables)
}

fn gen_set_table(m: usize, density: f64, rng: &mut ChaCha8Rng) -> SetFunctionTable {
    let img = (0..m)
        .map(|_| {
            (1..=m)
                .filter(|_| rng.random_bool(density))
                .collect::<BTreeSet<usize>>()
        })
        .collect();
    SetFunctionTable::new(m, img).expect("generated entries are in range")
}

/// Seeded intersection instance; `density` is the per-element membership
/// probability of every image set.
pub fn gen_intersect(m: usize, q: usize, density: f64, seed: u64) -> Result<IntersectInstance> {
    if m == 0 || q < 2 {
        return Err(Error::InvalidArgument("need m >= 1 and q >= 2".into()));
    }
    check_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let side_a = (0..q).map(|_| gen_set_table(m, density, &mut rng)).collect();
    let side_b = (0..q).map(|_| gen_set_table(m, density, &mut rng)).collect();
    IntersectInstance::new(side_a, side_b)
}

/// Seeded INDEX instance over the pair encoding of an `n_nodes` graph:
/// `n(n-1)/2` bits, each set with probability `density`, plus a random
/// query index.
pub fn gen_index(n_nodes: usize, density: f64, seed: u64) -> Result<IndexInstance> {
    if n_nodes < 2 {
        return Err(Error::InvalidArgument("need at least two nodes".into()));
    }
    check_density(density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let big_n = n_nodes * (n_nodes - 1) / 2;
    let bits = (0..big_n).map(|_| rng.random_bool(density)).collect();
    let index = rng.random_range(0..big_n);
    IndexInstance::new(bits, index)
}

fn check_density(density: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::InvalidArgument(format!(
            "density {density} outside [0, 1]"
        )));
    }
    Ok(())
}

/// Kind-dispatched generator. For `Pc` the density is ignored; for
/// `Index`, `m` is the node count of the encoded graph and `q` is
/// ignored.
pub fn gen_random(
    kind: InstanceKind,
    m: usize,
    q: usize,
    density: f64,
    seed: u64,
) -> Result<Instance> {
    match kind {
        InstanceKind::Pc => Ok(Instance::Pc(gen_pc(m, q, seed)?)),
        InstanceKind::Intersect => Ok(Instance::Intersect(gen_intersect(m, q, density, seed)?)),
        InstanceKind::Index => Ok(Instance::Index(gen_index(m, density, seed)?)),
    }
}

/// Writes the instance text format:
///
/// ```text
/// PC <q> <m>        |  SC2 <q> <m>      |  IDX <N> <i>
/// F <player> <arg> <val>...             |  A <bitstring>
/// ```
///
/// Set tables list zero or more values per line; `SC2` players `1..=q`
/// are side A and `q+1..=2q` are side B.
pub fn write_instance(inst: &Instance, sink: &mut dyn Write) -> Result<u64> {
    let mut buf = String::new();
    match inst {
        Instance::Pc(pc) => {
            buf.push_str(&format!("PC {} {}\n", pc.q(), pc.m()));
            for (p, table) in pc.tables.iter().enumerate() {
                for arg in 1..=table.m() {
                    buf.push_str(&format!("F {} {} {}\n", p + 1, arg, table.apply(arg)));
                }
            }
        }
        Instance::Intersect(sc) => {
            buf.push_str(&format!("SC2 {} {}\n", sc.q(), sc.m()));
            let sides = sc.side_a.iter().chain(&sc.side_b);
            for (p, table) in sides.enumerate() {
                for arg in 1..=table.m() {
                    buf.push_str(&format!("F {} {}", p + 1, arg));
                    for val in table.apply(arg) {
                        buf.push_str(&format!(" {val}"));
                    }
                    buf.push('\n');
                }
            }
        }
        Instance::Index(idx) => {
            buf.push_str(&format!("IDX {} {}\n", idx.len(), idx.index));
            buf.push_str("A ");
            buf.extend(idx.bits.iter().map(|&b| if b { '1' } else { '0' }));
            buf.push('\n');
        }
    }
    sink.write_all(buf.as_bytes())?;
    Ok(buf.len() as u64)
}

/// Parses the instance text format; inverse of [`write_instance`].
pub fn read_instance(source: &mut dyn BufRead) -> Result<Instance> {
    let mut lines = Vec::new();
    for (idx, line) in source.lines().enumerate() {
        let line = line?;
        let body = match line.find('#') {
            Some(pos) => line[..pos].to_string(),
            None => line,
        };
        if !body.trim().is_empty() {
            lines.push((idx + 1, body));
        }
    }
    let (header_line, header) = lines.first().ok_or(Error::Parse {
        line: 0,
        msg: "empty instance".into(),
    })?;
    let fields: Vec<&str> = header.split_whitespace().collect();
    let parse_usize = |line: usize, s: &str| -> Result<usize> {
        s.parse().map_err(|_| Error::Parse {
            line,
            msg: format!("expected integer, got `{s}`"),
        })
    };
    match fields[0] {
        "PC" | "SC2" => {
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: *header_line,
                    msg: "header takes q and m".into(),
                });
            }
            let q = parse_usize(*header_line, fields[1])?;
            let m = parse_usize(*header_line, fields[2])?;
            let set_valued = fields[0] == "SC2";
            let players = if set_valued { 2 * q } else { q };
            let mut img: Vec<Vec<Option<BTreeSet<usize>>>> = vec![vec![None; m]; players];
            for (lineno, body) in &lines[1..] {
                let f: Vec<&str> = body.split_whitespace().collect();
                if f[0] != "F" || f.len() < 3 {
                    return Err(Error::Parse {
                        line: *lineno,
                        msg: "expected `F <player> <arg> <val>...`".into(),
                    });
                }
                let player = parse_usize(*lineno, f[1])?;
                let arg = parse_usize(*lineno, f[2])?;
                if player == 0 || player > players || arg == 0 || arg > m {
                    return Err(Error::Parse {
                        line: *lineno,
                        msg: format!("player {player} / arg {arg} out of range"),
                    });
                }
                if !set_valued && f.len() != 4 {
                    return Err(Error::Parse {
                        line: *lineno,
                        msg: "function tables take exactly one value".into(),
                    });
                }
                let vals = f[3..]
                    .iter()
                    .map(|s| parse_usize(*lineno, s))
                    .collect::<Result<BTreeSet<usize>>>()?;
                if img[player - 1][arg - 1].replace(vals).is_some() {
                    return Err(Error::Parse {
                        line: *lineno,
                        msg: format!("duplicate entry for player {player} arg {arg}"),
                    });
                }
            }
            let mut tables: Vec<Vec<BTreeSet<usize>>> = Vec::with_capacity(players);
            for (p, rows) in img.into_iter().enumerate() {
                let mut table = Vec::with_capacity(m);
                for (a, row) in rows.into_iter().enumerate() {
                    table.push(row.ok_or_else(|| Error::Parse {
                        line: *header_line,
                        msg: format!("missing entry for player {} arg {}", p + 1, a + 1),
                    })?);
                }
                tables.push(table);
            }
            if set_valued {
                let mut side_tables = tables
                    .into_iter()
                    .map(|img| SetFunctionTable::new(m, img))
                    .collect::<Result<Vec<_>>>()?;
                let side_b = side_tables.split_off(q);
                Ok(Instance::Intersect(IntersectInstance::new(
                    side_tables,
                    side_b,
                )?))
            } else {
                let tables = tables
                    .into_iter()
                    .map(|img| {
                        let singletons = img
                            .into_iter()
                            .map(|set| {
                                if set.len() == 1 {
                                    Ok(*set.iter().next().unwrap())
                                } else {
                                    Err(Error::Parse {
                                        line: *header_line,
                                        msg: "function entry must be a single value".into(),
                                    })
                                }
                            })
                            .collect::<Result<Vec<usize>>>()?;
                        FunctionTable::new(m, singletons)
                    })
                    .collect::<Result<Vec<_>>>()?;
                Ok(Instance::Pc(PcInstance::new(tables)?))
            }
        }
        "IDX" => {
            if fields.len() != 3 {
                return Err(Error::Parse {
                    line: *header_line,
                    msg: "header takes N and i".into(),
                });
            }
            let big_n = parse_usize(*header_line, fields[1])?;
            let index = parse_usize(*header_line, fields[2])?;
            let bit_line = lines.get(1).ok_or(Error::Parse {
                line: *header_line,
                msg: "missing `A` line".into(),
            })?;
            let f: Vec<&str> = bit_line.1.split_whitespace().collect();
            if f.len() != 2 || f[0] != "A" {
                return Err(Error::Parse {
                    line: bit_line.0,
                    msg: "expected `A <bitstring>`".into(),
                });
            }
            let bits = f[1]
                .chars()
                .map(|c| match c {
                    '0' => Ok(false),
                    '1' => Ok(true),
                    other => Err(Error::Parse {
                        line: bit_line.0,
                        msg: format!("bad bit `{other}`"),
                    }),
                })
                .collect::<Result<Vec<bool>>>()?;
            if bits.len() != big_n {
                return Err(Error::Parse {
                    line: bit_line.0,
                    msg: format!("bitstring length {} != declared {big_n}", bits.len()),
                });
            }
            Ok(Instance::Index(IndexInstance::new(bits, index)?))
        }
        other => Err(Error::Parse {
            line: *header_line,
            msg: format!("unknown instance kind `{other}`"),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn table(m: usize, img: &[usize]) -> FunctionTable {
        FunctionTable::new(m, img.to_vec()).unwrap()
    }

    fn set_table(m: usize, img: &[&[usize]]) -> SetFunctionTable {
        SetFunctionTable::new(m, img.iter().map(|s| s.iter().copied().collect()).collect())
            .unwrap()
    }

    #[test]
    fn identity_composition_is_one() {
        for q in 1..=4 {
            for m in 1..=5 {
                let inst =
                    PcInstance::new((0..q).map(|_| FunctionTable::identity(m)).collect()).unwrap();
                assert_eq!(eval_pointer_chase(&inst), 1);
            }
        }
    }

    #[test]
    fn hand_composition() {
        // f_2 swaps, f_1 is identity: f_1(f_2(1)) = 2.
        let inst = PcInstance::new(vec![table(2, &[1, 2]), table(2, &[2, 1])]).unwrap();
        assert_eq!(eval_pointer_chase(&inst), 2);
    }

    #[test]
    fn chase_matches_independent_loop() {
        for seed in 0..50 {
            let inst = gen_pc(4, 3, seed).unwrap();
            // Duplicate evaluation written as an explicit index loop.
            let mut x = 1usize;
            for j in (0..inst.q()).rev() {
                x = inst.tables[j].apply(x);
            }
            assert_eq!(eval_pointer_chase(&inst), x, "seed {seed}");
        }
    }

    #[test]
    fn singleton_tables_degenerate_to_pointer_chasing() {
        for seed in 0..50 {
            let pc = gen_pc(5, 3, seed).unwrap();
            let sets: Vec<SetFunctionTable> =
                pc.tables.iter().map(SetFunctionTable::from_function).collect();
            let out = eval_set_chase(&sets);
            assert_eq!(out, BTreeSet::from([eval_pointer_chase(&pc)]));
        }
    }

    #[test]
    fn empty_innermost_image_propagates() {
        let inner = set_table(3, &[&[], &[1], &[2]]);
        let outer = set_table(3, &[&[1, 2], &[3], &[1]]);
        assert!(eval_set_chase(&[outer, inner]).is_empty());
    }

    #[test]
    fn hand_union() {
        // f_2(1) = {1,2}; f_1(1) = {3}, f_1(2) = {1,3} -> {1,3}
        let f1 = set_table(3, &[&[3], &[1, 3], &[]]);
        let f2 = set_table(3, &[&[1, 2], &[], &[]]);
        assert_eq!(eval_set_chase(&[f1, f2]), BTreeSet::from([1, 3]));
    }

    #[test]
    fn intersect_identity_sides() {
        let side = |m| vec![SetFunctionTable::identity(m), SetFunctionTable::identity(m)];
        let inst = IntersectInstance::new(side(4), side(4)).unwrap();
        assert!(eval_intersect(&inst));
    }

    #[test]
    fn empty_side_never_intersects() {
        let empty_inner = set_table(3, &[&[], &[], &[]]);
        let full = set_table(3, &[&[1, 2, 3], &[1, 2, 3], &[1, 2, 3]]);
        let inst = IntersectInstance::new(
            vec![full.clone(), empty_inner],
            vec![full.clone(), full],
        )
        .unwrap();
        assert!(!eval_intersect(&inst));
    }

    #[test]
    fn intersect_matches_definition_and_is_symmetric() {
        for seed in 0..200 {
            let inst = gen_intersect(6, 3, 0.3, seed).unwrap();
            let expect = !eval_set_chase(&inst.side_a)
                .intersection(&eval_set_chase(&inst.side_b))
                .copied()
                .collect::<BTreeSet<_>>()
                .is_empty();
            assert_eq!(eval_intersect(&inst), expect);
            let swapped =
                IntersectInstance::new(inst.side_b.clone(), inst.side_a.clone()).unwrap();
            assert_eq!(eval_intersect(&inst), eval_intersect(&swapped));
        }
    }

    #[test]
    fn generators_are_seed_deterministic() {
        assert_eq!(gen_pc(6, 4, 9).unwrap(), gen_pc(6, 4, 9).unwrap());
        assert_eq!(
            gen_intersect(5, 2, 0.4, 9).unwrap(),
            gen_intersect(5, 2, 0.4, 9).unwrap()
        );
        assert_eq!(gen_index(5, 0.5, 9).unwrap(), gen_index(5, 0.5, 9).unwrap());
        assert_ne!(gen_pc(6, 4, 9).unwrap(), gen_pc(6, 4, 10).unwrap());
    }

    #[test]
    fn density_boundaries() {
        let empty = gen_intersect(4, 2, 0.0, 1).unwrap();
        assert!(empty
            .side_a
            .iter()
            .chain(&empty.side_b)
            .all(|t| (1..=t.m()).all(|x| t.apply(x).is_empty())));
        let full = gen_intersect(4, 2, 1.0, 1).unwrap();
        assert!(full
            .side_a
            .iter()
            .chain(&full.side_b)
            .all(|t| (1..=t.m()).all(|x| t.apply(x).len() == t.m())));
        assert!(gen_intersect(4, 2, 1.5, 1).is_err());
    }

    #[test]
    fn pair_indexing_round_trips() {
        let n = 7;
        let mut k = 0;
        for a in 0..n {
            for b in (a + 1)..n {
                assert_eq!(index_of_pair(n, a, b), k);
                assert_eq!(pair_of_index(n, k), (a, b));
                k += 1;
            }
        }
        assert_eq!(k, n * (n - 1) / 2);
    }

    #[test]
    fn graph_nodes_requires_triangular_length() {
        assert_eq!(IndexInstance::new(vec![false; 10], 0).unwrap().graph_nodes().unwrap(), 5);
        assert!(IndexInstance::new(vec![false; 7], 0).unwrap().graph_nodes().is_err());
    }

    #[test]
    fn set_chase_is_monotone_under_table_enlargement() {
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for seed in 0..100 {
            let inst = gen_intersect(5, 3, 0.3, seed).unwrap();
            let mut grown = inst.side_a.clone();
            // Enlarge one random entry of one random table.
            let t = rng.random_range(0..grown.len());
            let arg = rng.random_range(0..grown[t].m());
            let mut img: Vec<BTreeSet<usize>> =
                (1..=grown[t].m()).map(|x| grown[t].apply(x).clone()).collect();
            img[arg].insert(rng.random_range(1..=grown[t].m()));
            grown[t] = SetFunctionTable::new(grown[t].m(), img).unwrap();
            let before = eval_set_chase(&inst.side_a);
            let after = eval_set_chase(&grown);
            assert!(before.is_subset(&after), "seed {seed}");
        }
    }

    #[test]
    fn instance_text_round_trips() {
        let cases = vec![
            gen_random(InstanceKind::Pc, 4, 3, 0.0, 5).unwrap(),
            gen_random(InstanceKind::Intersect, 3, 2, 0.4, 5).unwrap(),
            gen_random(InstanceKind::Index, 5, 0, 0.5, 5).unwrap(),
        ];
        for inst in cases {
            let mut buf = Vec::new();
            write_instance(&inst, &mut buf).unwrap();
            let back = read_instance(&mut buf.as_slice()).unwrap();
            assert_eq!(back, inst);
        }
    }

    #[test]
    fn missing_table_entry_rejected() {
        let text = "PC 1 2\nF 1 1 2\n";
        assert!(read_instance(&mut text.as_bytes()).is_err());
    }
}
