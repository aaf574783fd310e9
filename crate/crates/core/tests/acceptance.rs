//! Acceptance suite: one PASS/FAIL line per criterion.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use diaghom::colimits::{colim_group, colim_presentation, ColimResult, DEFAULT_MAX_COSETS};
use diaghom::connectivity::{connectivity, Cocon, FirstGroup, Resolution};
use diaghom::cotriple::{degenerate_generation_formula, moore_homotopy, verify_main1, CotripleResolution};
use diaghom::diagramhomology::{colim_n, flow_subgroup, full_replacement, les_check, FormalReplacement};
use diaghom::diagrams::{AbelianDiagram, GroupDiagram};
use diaghom::document::{Diagram, InputDocument};
use diaghom::grouphomology::group_homology;
use diaghom::permgroups::{abelianization, commutator, fat_commutator, intersect, join, GroupHom, NormalSubgroupList, Perm, PermGroup};
use diaghom::shapes::FreeCategory;
use diaghom::spaces::{
    circle_wedge, classifying_space, constant_hocolim, hocolim_pointed, point, FiniteSimplicialSet, SimplicialDiagram,
    SimplicialMap,
};
use diaghom::suite::{random_abelian_diagram, random_graph, random_group_diagram, random_ses, rng, DEFAULT_SEED};
use diaghom::{AbHom, FpAbelianGroup};

type Outcome = Result<String, String>;

fn fixture(name: &str) -> InputDocument {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name);
    InputDocument::parse(&std::fs::read_to_string(&path).expect("fixture")).expect("valid fixture")
}

fn group_fixture(name: &str) -> GroupDiagram {
    match fixture(name).to_diagram().expect("valid diagram") {
        Diagram::Group(d) => d,
        Diagram::Abelian(_) => panic!("{name} is not a group diagram"),
    }
}

fn z(n: u32) -> FpAbelianGroup {
    if n == 0 { FpAbelianGroup::free(1) } else { FpAbelianGroup::cyclic(n.into()) }
}

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg()) }
}

fn within(limit: Duration, start: Instant) -> Result<(), String> {
    ensure(start.elapsed() <= limit, || format!("took {:?}, limit {limit:?}", start.elapsed()))
}

fn e<E: std::fmt::Display>(x: E) -> String {
    x.to_string()
}

/// Spaces built along the way, for the exhaustive identity check.
#[derive(Default)]
struct Built {
    spaces: Vec<(String, FiniteSimplicialSet)>,
}

fn criterion_1() -> Outcome {
    let mut orders = Vec::new();
    for (name, want) in [("expar1.json", 2), ("expar2.json", 1)] {
        let start = Instant::now();
        let d = group_fixture(name);
        let r = colim_group(&d, DEFAULT_MAX_COSETS).map_err(e)?;
        r.verify(&d).map_err(e)?;
        let order = r.order().map_err(e)?;
        ensure(order == Some(want), || format!("{name}: colim order {order:?}, expected {want}"))?;
        within(Duration::from_secs(5), start)?;
        orders.push(want);
    }
    Ok(format!("A3 => S3 gives order {}, Z2 => S3 gives the trivial group", orders[0]))
}

fn criterion_2() -> Outcome {
    let start = Instant::now();
    let r = connectivity(&group_fixture("expar2.json"), 3, DEFAULT_MAX_COSETS).map_err(e)?;
    ensure(r.cocon == Cocon::Exact(2), || format!("cocon {}", r.cocon))?;
    ensure(matches!(&r.first_group, FirstGroup::Abelian(g) if *g == z(3)), || format!("group {}", r.first_group))?;
    ensure(r.trail.len() == 2, || format!("trail of length {}", r.trail.len()))?;
    let (t2, t3) = (&r.trail[0], &r.trail[1]);
    ensure(t2.dimension == 2 && t2.left.is_trivial() && t2.right.is_trivial(), || format!("{t2:?}"))?;
    ensure(t3.dimension == 3 && t3.left == z(3) && t3.right.is_trivial(), || format!("{t3:?}"))?;
    ensure(t3.resolution == Resolution::Left, || format!("{t3:?}"))?;
    within(Duration::from_secs(60), start)?;
    Ok(format!("cocon = 2, colim_2 = {}, trail (0, 0), ({}, 0)", z(3), t3.left))
}

fn criterion_3(built: &mut Built) -> Outcome {
    let start = Instant::now();
    let d = group_fixture("expar2.json");
    let sd = SimplicialDiagram::classifying(&d, 4).map_err(e)?;
    let h = hocolim_pointed(&sd, 4).map_err(e)?;
    let t = h.reduced_homology_table(3).map_err(e)?;
    ensure(t[1].is_trivial() && t[2].is_trivial() && t[3] == z(3), || format!("H~ = {:?}", &t[1..]))?;
    let r = connectivity(&d, 3, DEFAULT_MAX_COSETS).map_err(e)?;
    ensure(matches!(&r.first_group, FirstGroup::Abelian(g) if *g == t[3]), || "disagrees with connectivity".into())?;
    within(Duration::from_secs(600), start)?;
    let nd = h.nondegenerate(4).len();
    built.spaces.push(("expar2 hocolim".into(), h));
    Ok(format!("H~_1..3 = 0, 0, {} ({nd} nondegenerate 4-simplices)", t[3]))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let s3 = PermGroup::symmetric(3);
    let z2 = PermGroup::cyclic(2);
    let cases = [
        ("H1(S3)", &s3, 1, z(2)),
        ("H2(S3)", &s3, 2, FpAbelianGroup::trivial()),
        ("H3(S3)", &s3, 3, z(6)),
        ("H2(Z2)", &z2, 2, FpAbelianGroup::trivial()),
        ("H3(Z2)", &z2, 3, z(2)),
    ];
    let mut shown = Vec::new();
    for (label, g, n, want) in cases {
        let h = group_homology(g, n).map_err(e)?;
        ensure(h == want, || format!("{label} = {h}, expected {want}"))?;
        shown.push(format!("{label}={h}"));
    }
    within(Duration::from_secs(60), start)?;
    Ok(shown.join(" "))
}

fn criterion_5() -> Outcome {
    let start = Instant::now();
    let mut r = rng(DEFAULT_SEED);
    let count = 120;
    for k in 0..count {
        let d = random_abelian_diagram(&mut r, 4, 5);
        let flows = flow_subgroup(&d).map_err(e)?;
        let colim1 = colim_n(&d, 1).map_err(e)?;
        ensure(flows == colim1, || format!("diagram {k}: flows {flows} vs coLim_1 {colim1}\n{d:?}"))?;
    }
    within(Duration::from_secs(120), start)?;
    Ok(format!("{count} random diagrams agree"))
}

/// Finite colimits are abelianized as permutation groups; the rest from the
/// relators of the colimit presentation.
fn colim_abelianization(d: &GroupDiagram, r: &ColimResult) -> Result<FpAbelianGroup, String> {
    match r {
        ColimResult::Trivial => Ok(FpAbelianGroup::trivial()),
        ColimResult::Finite { group, .. } => Ok(abelianization(group).map_err(e)?.group),
        ColimResult::Unknown { .. } => Ok(colim_presentation(d).map_err(e)?.presentation.abelianization()),
    }
}

fn criterion_6(built: &mut Built) -> Outcome {
    let mut diagrams = vec![("expar1".to_string(), group_fixture("expar1.json")), ("expar2".to_string(), group_fixture("expar2.json"))];
    let mut r = rng(DEFAULT_SEED + 6);
    for k in 0..22 {
        diagrams.push((format!("random {k}"), random_group_diagram(&mut r).map_err(e)?));
    }
    let (mut nontrivial, mut unknown) = (0, 0);
    for (name, d) in &diagrams {
        let c = colim_group(d, DEFAULT_MAX_COSETS).map_err(e)?;
        c.verify(d).map_err(e)?;
        unknown += usize::from(matches!(c, ColimResult::Unknown { .. }));
        let want = colim_abelianization(d, &c)?;
        let h = hocolim_pointed(&SimplicialDiagram::classifying(d, 2).map_err(e)?, 2).map_err(e)?;
        let h1 = h.reduced_homology(1).map_err(e)?;
        ensure(h1 == want, || format!("{name}: H~_1 = {h1}, colim_ab = {want}"))?;
        nontrivial += usize::from(!want.is_trivial());
        built.spaces.push((format!("{name} hocolim"), h));
    }
    Ok(format!("{} diagrams agree ({nontrivial} with nontrivial H~_1, {unknown} infinite colimits)", diagrams.len()))
}

fn criterion_7() -> Outcome {
    let r = connectivity(&group_fixture("sphere.json"), 3, DEFAULT_MAX_COSETS).map_err(e)?;
    ensure(r.cocon == Cocon::Exact(1), || format!("cocon {}", r.cocon))?;
    ensure(matches!(&r.first_group, FirstGroup::Abelian(g) if *g == z(0)), || format!("group {}", r.first_group))?;
    Ok(format!("cocon = 1, colim_1 = {}", r.first_group))
}

fn abelian_suite(seed: u64, count: usize, max_vertices: usize, max_arrows: usize) -> Vec<AbelianDiagram> {
    let mut r = rng(seed);
    (0..count).map(|_| random_abelian_diagram(&mut r, max_vertices, max_arrows)).collect()
}

fn criterion_8() -> Outcome {
    let suite = abelian_suite(DEFAULT_SEED + 8, 20, 3, 3);
    for (k, a) in suite.iter().enumerate() {
        let rep = verify_main1(a, 3).map_err(e)?;
        ensure(rep.holds(), || format!("diagram {k}: {rep:?}\n{a:?}"))?;
    }
    Ok(format!("{} diagrams, levels 0..3", suite.len()))
}

/// A finite abelian group as a product of disjoint cycles.
struct PermModel {
    group: FpAbelianGroup,
    perms: PermGroup,
    moduli: Vec<usize>,
    degree: usize,
}

impl PermModel {
    fn new(g: &FpAbelianGroup) -> Self {
        let moduli: Vec<usize> = g.torsion().iter().map(|d| d.try_into().unwrap()).collect();
        let degree = moduli.iter().sum::<usize>().max(1);
        let mut m = PermModel { group: g.clone(), perms: PermGroup::trivial(degree), moduli, degree };
        let gens = (0..g.num_generators())
            .map(|i| {
                let mut v = vec![0.into(); g.num_generators()];
                v[i] = 1.into();
                m.perm(&v)
            })
            .collect();
        m.perms = PermGroup::new(degree, gens).unwrap();
        m
    }

    fn perm(&self, v: &[num_bigint::BigInt]) -> Perm {
        let c = self.group.normal_coords(v);
        let mut images: Vec<usize> = (0..self.degree).collect();
        let mut off = 0;
        for (k, &m) in self.moduli.iter().enumerate() {
            let s: usize = (&c[k]).try_into().unwrap();
            for i in 0..m {
                images[off + i] = off + (i + s) % m;
            }
            off += m;
        }
        Perm::from_images(images).unwrap()
    }

    fn hom(&self, f: &AbHom, target: &PermModel) -> GroupHom {
        let images = (0..self.group.num_generators())
            .map(|i| {
                let mut v = vec![0.into(); self.group.num_generators()];
                v[i] = 1.into();
                target.perm(&f.apply(&v))
            })
            .collect();
        GroupHom::new(self.perms.clone(), target.perms.clone(), images).unwrap()
    }
}

fn fat_commutator_checks() -> Result<usize, String> {
    let s4 = PermGroup::symmetric(4);
    let a4 = PermGroup::alternating(4);
    let v4 = PermGroup::new(4, vec![Perm::from_cycles(4, &[&[0, 1], &[2, 3]]).unwrap(), Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap()])
        .unwrap();
    let one = PermGroup::trivial(4);
    let normals = [s4.clone(), a4, v4, one];
    let mut checks = 0;
    for k0 in &normals {
        for k1 in &normals {
            let l = NormalSubgroupList::new(s4.clone(), vec![k0.clone(), k1.clone()]).map_err(e)?;
            let fat = fat_commutator(&l).map_err(e)?;
            ensure(fat.same_elements(&commutator(k0, k1).map_err(e)?).map_err(e)?, || "[[K0,K1]] != [K0,K1]".into())?;
            checks += 1;
            for k2 in &normals {
                let l = NormalSubgroupList::new(s4.clone(), vec![k0.clone(), k1.clone(), k2.clone()]).map_err(e)?;
                let fat = fat_commutator(&l).map_err(e)?;
                let c = |a: &PermGroup, b: &PermGroup, c: &PermGroup| commutator(a, &intersect(b, c)?);
                let display = join(
                    &join(&c(k0, k1, k2).map_err(e)?, &c(k1, k0, k2).map_err(e)?).map_err(e)?,
                    &c(k2, k0, k1).map_err(e)?,
                )
                .map_err(e)?;
                ensure(fat.same_elements(&display).map_err(e)?, || "m = 2 expansion differs".into())?;
                checks += 1;
            }
        }
    }
    // Kernels of the faces of a finite simplicial abelian group level.
    let suite = abelian_suite(DEFAULT_SEED + 90, 6, 2, 2);
    for a in suite.iter().filter(|a| a.objects().iter().all(FpAbelianGroup::is_finite)) {
        let s = full_replacement(a, 2).map_err(e)?;
        let (top, below) = (PermModel::new(s.level(2)), PermModel::new(s.level(1)));
        let kernels = (0..=2).map(|i| top.hom(s.face(2, i), &below).kernel()).collect::<Result<Vec<_>, _>>().map_err(e)?;
        let l = NormalSubgroupList::new(top.perms.clone(), kernels).map_err(e)?;
        ensure(fat_commutator(&l).map_err(e)?.is_trivial(), || "abelian ambient gave a nontrivial fat commutator".into())?;
        checks += 1;
    }
    Ok(checks)
}

fn criterion_9() -> Outcome {
    let suite = abelian_suite(DEFAULT_SEED + 9, 20, 3, 3);
    let mut formula_cases = 0;
    for (k, a) in suite.iter().enumerate() {
        let s = full_replacement(a, 3).map_err(e)?;
        let alt = s.alternating_complex().map_err(e)?;
        for n in 0..3 {
            let m = moore_homotopy(&s, n).map_err(e)?;
            let h = alt.homology_group(n);
            ensure(m == h, || format!("diagram {k}, n = {n}: Moore {m} vs alternating {h}"))?;
            match degenerate_generation_formula(&s, n) {
                Ok(f) => {
                    ensure(f == m, || format!("diagram {k}, n = {n}: formula {f} vs Moore {m}"))?;
                    formula_cases += 1;
                }
                Err(diaghom::Error::PreconditionFailed(_)) => {}
                Err(x) => return Err(e(x)),
            }
        }
    }
    let fat = fat_commutator_checks()?;
    Ok(format!("{} diagrams, {formula_cases} degenerate-generation cases, {fat} fat-commutator checks", suite.len()))
}

fn criterion_10(built: &Built) -> Outcome {
    let mut r = rng(DEFAULT_SEED + 10);
    let mut formal = 0;
    for _ in 0..10 {
        let d = random_group_diagram(&mut r).map_err(e)?;
        formal += FormalReplacement::new(&d, 3).check_identities().map_err(e)?;
    }
    let suite = abelian_suite(DEFAULT_SEED + 11, 10, 3, 3);
    for a in &suite {
        let c = CotripleResolution::new(a, 3).map_err(e)?;
        c.check_identities().map_err(e)?;
        ensure(c.augmentation_coequalizes().map_err(e)?, || "augmentation does not coequalize".into())?;
    }
    let mut equations = 0;
    for (name, x) in &built.spaces {
        equations += x.check_identities().map_err(|err| format!("{name}: {err}"))?;
    }
    Ok(format!(
        "{formal} formal-replacement checks, {} cotriple resolutions, {} simplicial sets ({equations} equations)",
        suite.len(),
        built.spaces.len()
    ))
}

fn criterion_11(built: &mut Built) -> Outcome {
    let d = group_fixture("contr.json");
    let sd = SimplicialDiagram::classifying(&d, 4).map_err(e)?;
    let h = hocolim_pointed(&sd, 4).map_err(e)?;
    let t = h.reduced_homology_table(3).map_err(e)?;
    ensure(t[1].is_trivial() && t[2] == z(0) && t[3].is_trivial(), || format!("H~ = {:?}", &t[1..]))?;
    let c = colim_group(&d, DEFAULT_MAX_COSETS).map_err(e)?;
    ensure(c.is_trivial(), || "colimit of Z => 1 is not trivial".into())?;
    built.spaces.push(("contr hocolim".into(), h));
    Ok("H~_1 = 0, H~_2 = Z, colim trivial".into())
}

fn criterion_12(built: &mut Built) -> Outcome {
    let mut r = rng(DEFAULT_SEED + 12);
    let cap = 4;
    let ys: Vec<(&str, FiniteSimplicialSet)> = vec![
        ("point", point(cap)),
        ("S1", circle_wedge(1, cap)),
        ("S1 v S1", circle_wedge(2, cap)),
        ("BZ2", classifying_space(&PermGroup::cyclic(2), cap).map_err(e)?),
        ("BZ3", classifying_space(&PermGroup::cyclic(3), cap).map_err(e)?),
    ];
    for k in 0..10 {
        let cat = FreeCategory::new(random_graph(&mut r, 3, 3)).map_err(e)?;
        let (yname, y) = &ys[k % ys.len()];
        let a = hocolim_pointed(&SimplicialDiagram::constant(cat.clone(), y), cap).map_err(e)?;
        let b = constant_hocolim(&cat, y, cap).map_err(e)?;
        let (ha, hb) = (a.reduced_homology_table(3).map_err(e)?, b.reduced_homology_table(3).map_err(e)?);
        ensure(ha == hb, || format!("pair {k} ({yname}): {ha:?} vs {hb:?}"))?;
        built.spaces.push((format!("forconst {k} wedge"), a));
        built.spaces.push((format!("forconst {k} quotient"), b));
    }
    let one = FreeCategory::new(diaghom::shapes::Graph::from_edges(&["x"], &[]).unwrap()).unwrap();
    let y = circle_wedge(1, cap);
    let b = constant_hocolim(&one, &y, cap).map_err(e)?;
    ensure(b.reduced_homology_table(3).map_err(e)? == y.reduced_homology_table(3).map_err(e)?, || "one-object case".into())?;
    let _ = SimplicialMap::identity(&y);
    Ok("10 (category, Y) pairs agree through dimension 3".into())
}

fn criterion_13() -> Outcome {
    let mut r = rng(DEFAULT_SEED + 13);
    let count = 25;
    for k in 0..count {
        let ses = random_ses(&mut r, 3, 4).map_err(e)?;
        let rep = les_check(&ses, 2).map_err(e)?;
        ensure(rep.is_exact(), || format!("sequence {k} not exact: {:?}", rep.nodes.iter().filter(|n| !n.exact).map(|n| &n.label).collect::<Vec<_>>()))?;
    }
    Ok(format!("{count} short exact sequences, exact through dimension 2"))
}

fn main() {
    let mut built = Built::default();
    let mut results: Vec<(u32, &str, Outcome, Duration)> = Vec::new();
    let mut run = |n: u32, name: &'static str, f: &mut dyn FnMut(&mut Built) -> Outcome, built: &mut Built| {
        let start = Instant::now();
        let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| f(built)))
            .unwrap_or_else(|p| Err(format!("panicked: {:?}", p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string())))));
        let line = match &out {
            Ok(msg) => format!("criterion {n:>2} PASS  {name}: {msg}"),
            Err(msg) => format!("criterion {n:>2} FAIL  {name}: {msg}"),
        };
        println!("{line}  [{:.2?}]", start.elapsed());
        results.push((n, name, out, start.elapsed()));
    };
    run(1, "expar1 colimits", &mut |_| criterion_1(), &mut built);
    run(2, "expar2 connectivity", &mut |_| criterion_2(), &mut built);
    run(3, "expar2 hocolim homology", &mut criterion_3, &mut built);
    run(4, "group homology table", &mut |_| criterion_4(), &mut built);
    run(5, "flows = coLim_1", &mut |_| criterion_5(), &mut built);
    run(6, "H~_1(hocolim) = colim_ab", &mut criterion_6, &mut built);
    run(7, "sphere diagram", &mut |_| criterion_7(), &mut built);
    run(8, "cotriple comparison", &mut |_| criterion_8(), &mut built);
    run(9, "Moore equivalences", &mut |_| criterion_9(), &mut built);
    run(11, "pointed contr example", &mut criterion_11, &mut built);
    run(12, "constant hocolims", &mut criterion_12, &mut built);
    run(13, "long exact sequences", &mut |_| criterion_13(), &mut built);
    run(10, "simplicial identities", &mut |b| criterion_10(b), &mut built);
    let failed: Vec<u32> = results.iter().filter(|r| r.2.is_err()).map(|r| r.0).collect();
    println!("{} of {} criteria passed", results.len() - failed.len(), results.len());
    if !failed.is_empty() {
        println!("failed: {failed:?}");
        std::process::exit(1);
    }
}
