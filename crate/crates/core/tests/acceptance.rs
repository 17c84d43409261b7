mod props;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use bspkit::intmat::identity;
use bspkit::lattice::{affine_edge_lengths, slice_at, width_heights};
use bspkit::markov::{
    clifford_potential, exotic_112_potential, judicious_112_potential, vianna_112_potential, Pipeline,
};
use bspkit::mutation::{bsp_transform, mutate_polytope};
use bspkit::render::marker_coordinates;
use bspkit::{augmentation_lift, are_equivalent, render, MarkovTriple, Poly, Polytope, RenderConfig, WidthVector};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl Into<String>) -> Result<(), String> {
    if cond { Ok(()) } else { Err(msg.into()) }
}

fn p(rank: usize, s: &str) -> Poly {
    Poly::parse_in(rank, s).unwrap()
}

fn higher_mutation_source(n: usize) -> Poly {
    let vars: Vec<String> = (1..n).map(|i| format!("x{i}")).collect();
    let names: Vec<String> = vars.iter().cloned().chain(["z".to_string()]).collect();
    Poly::parse_with(&names, &format!("(1+{})/z + z^{n}/({})", vars.join("+"), vars.join("*"))).unwrap()
}

fn wall_crossing() -> Outcome {
    let w = p(3, "(y+(1+x)^2)/z + z^3/(x*y^2)");
    let g = p(2, "y+(1+x)^2");
    let expected = p(3, "1/z + z^3*(y+(1+x)^2)^3/(x*y^2)");
    let start = Instant::now();
    let (r, _) = bsp_transform(&w, 2, &g).map_err(|e| e.to_string())?;
    let t = start.elapsed();
    ensure(r == expected, format!("got {r:?}"))?;
    ensure(t < Duration::from_millis(100), format!("took {t:?}"))?;
    Ok(format!("{} terms in {t:?}", r.support().len()))
}

fn augmentation_lifts() -> Outcome {
    for (n, index) in [(2, 3), (3, 4)] {
        let l = augmentation_lift(&clifford_potential(n), &vec![-1; n]).map_err(|e| e.to_string())?;
        ensure(l.index == index, format!("clifford n={n}: index {}", l.index))?;
        let basis = (0..n).map(|k| { let mut r = vec![1; n]; r[k] += 1; r }).collect();
        let r = l.rebase(basis).map_err(|e| e.to_string())?;
        let expected = (0..n).fold(Poly::one(n), |a, i| a.add(&Poly::var(n, i)).unwrap());
        ensure(r.lifted == expected, format!("clifford n={n}: {:?}", r.lifted))?;
    }
    for n in 2..=4 {
        let mut v = vec![-1; n];
        v[1] = -2;
        let l = augmentation_lift(&vianna_112_potential(n), &v).map_err(|e| e.to_string())?;
        let mut basis = vec![identity(n)[0].clone()];
        for k in 1..n {
            let mut r = vec![1; n];
            r[1] = 2;
            r[k] += 1;
            basis.push(r);
        }
        let r = l.rebase(basis).map_err(|e| e.to_string())?;
        let sq = Poly::one(n).add(&Poly::var(n, 0)).unwrap().pow(2);
        let expected = (1..n).fold(sq, |a, i| a.add(&Poly::var(n, i)).unwrap());
        ensure(r.lifted == expected, format!("(1,1,2) n={n}: {:?}", r.lifted))?;
    }
    Ok("clifford n=2,3 and (1,1,2) n=2,3,4".into())
}

fn newton_mutation_consistency() -> Outcome {
    let cases = [
        ("disk surgery", vianna_112_potential(2), 1, p(1, "1+x")),
        ("higher n=3", higher_mutation_source(3), 2, p(2, "1+x+y")),
        ("higher n=4", higher_mutation_source(4), 3, p(3, "1+x+y+z")),
        ("exotic (1,1,2)", judicious_112_potential(), 2, p(2, "y+(1+x)^2")),
    ];
    for (name, w, axis, g) in cases {
        let (r, _) = bsp_transform(&w, axis, &g).map_err(|e| format!("{name}: {e}"))?;
        let f = g.embed_at_axis(axis).newton().map_err(|e| e.to_string())?;
        let src = w.newton().map_err(|e| e.to_string())?;
        let m = mutate_polytope(&src, &WidthVector::axis(w.rank(), axis), &f).map_err(|e| format!("{name}: {e}"))?;
        let mut a = r.newton().map_err(|e| e.to_string())?.vertices().to_vec();
        let mut b = m.polytope.vertices().to_vec();
        a.sort();
        b.sort();
        ensure(a == b, format!("{name}: {a:?} vs {b:?}"))?;
    }
    Ok("4 corpus transforms".into())
}

fn polytope_structure() -> Outcome {
    let t = judicious_112_potential().newton().map_err(|e| e.to_string())?;
    let r = -4..=4i64;
    let found = itertools::iproduct!(r.clone(), r.clone(), r)
        .filter_map(|(a, b, c)| WidthVector::new(vec![a, b, c]).ok())
        .find(|w| {
            width_heights(&t, w).ok() == Some((-1, 3, 4)) && slice_at(&t, w, 3).map(|s| s.is_point()).unwrap_or(false)
        });
    ensure(found.is_some(), "no width vector with heights (-1, 3) and a point on top")?;
    let e = exotic_112_potential().newton().map_err(|e| e.to_string())?;
    ensure(e.vertex_count() == 4, "exotic polytope is not a tetrahedron")?;
    let apex = vec![0, 0, -1];
    let facet_pts: Vec<Vec<i64>> = e.vertices().iter().filter(|v| **v != apex).cloned().collect();
    let facet = Polytope::from_points(&facet_pts).map_err(|e| e.to_string())?;
    let apex_edges: Vec<i64> = facet_pts
        .iter()
        .map(|v| Polytope::from_points(&[apex.clone(), v.clone()]).map(|s| affine_edge_lengths(&s)[0]))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    ensure(apex_edges == vec![1, 1, 1], format!("apex edges {apex_edges:?}"))?;
    ensure(affine_edge_lengths(&facet) == vec![3, 3, 6], format!("facet edges {:?}", affine_edge_lengths(&facet)))?;
    let factor = Polytope::from_points(&[vec![0, 1, 0], vec![0, 0, 0], vec![2, 0, 0]]).map_err(|e| e.to_string())?;
    ensure(are_equivalent(&facet, &factor.dilate(3)), "facet is not the dilated factor")?;
    Ok(format!("width {:?}, apex edges 1,1,1, facet 3,3,6", found.unwrap().as_slice()))
}

fn distinctness_report() -> Outcome {
    let start = Instant::now();
    let r = Pipeline::default().family_report(2, 3);
    let t = start.elapsed();
    ensure(r.complete, "some rows failed")?;
    ensure(r.rows.len() == 6, format!("{} rows", r.rows.len()))?;
    let k = r.rows.len();
    let pairs = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).filter(|&(i, j)| !r.equivalent[i][j]).count();
    ensure(pairs == 15, format!("{pairs} non-equivalent pairs"))?;
    ensure(r.escalations == 0, format!("{} pairs needed the full test", r.escalations))?;
    ensure(t < Duration::from_secs(60), format!("took {t:?}"))?;
    Ok(format!("15/15 pairs distinct by fingerprint in {t:?}"))
}

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

fn figure_reproduction() -> Outcome {
    let cfg = RenderConfig::default();
    for (name, w) in [("lift_112", judicious_112_potential()), ("exotic_112", exotic_112_potential())] {
        let poly = w.newton().map_err(|e| e.to_string())?;
        let svg = render(&poly, Some(&w), &cfg).map_err(|e| e.to_string())?;
        let support: std::collections::BTreeSet<Vec<i64>> = w.support().into_iter().collect();
        ensure(marker_coordinates(&svg, "support") == support, format!("{name}: support markers"))?;
        let vertices = marker_coordinates(&svg, "vertex");
        ensure(vertices.is_subset(&support), format!("{name}: vertex markers outside the support"))?;
        ensure(vertices == poly.vertices().iter().cloned().collect(), format!("{name}: vertex markers"))?;
        ensure(render(&poly, Some(&w), &cfg).map_err(|e| e.to_string())? == svg, format!("{name}: unstable"))?;
        let path = golden_dir().join(format!("{name}.svg"));
        if std::env::var_os("BSPKIT_BLESS").is_some() {
            std::fs::write(&path, &svg).map_err(|e| e.to_string())?;
        }
        let golden = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        ensure(golden == svg, format!("{name}: differs from {}", path.display()))?;
    }
    Ok("2 SVGs match their golden files".into())
}

fn property_suites() -> Outcome {
    let results = props::run_all();
    let failed: Vec<String> = results.iter().filter_map(|(n, r)| r.as_ref().err().map(|e| format!("{n}: {e}"))).collect();
    ensure(failed.is_empty(), failed.join("; "))?;
    Ok(format!("{} suites x {} cases", results.len(), props::CASES))
}

fn pipeline_validation() -> Outcome {
    let pipe = Pipeline::default();
    for (a, b, c) in [(1, 1, 1), (1, 1, 2), (1, 2, 5), (1, 5, 13), (2, 5, 29)] {
        let t = MarkovTriple::new(a, b, c).map_err(|e| e.to_string())?;
        let tri = pipe.vianna_triangle(&t).map_err(|e| format!("{t}: {e}"))?;
        let got = affine_edge_lengths(&tri);
        ensure(got == vec![a as i64, b as i64, c as i64], format!("{t}: edges {got:?}"))?;
    }
    Ok("5 triangles".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("golden wall-crossing", wall_crossing),
        ("golden augmentation lifts", augmentation_lifts),
        ("newton-mutation consistency", newton_mutation_consistency),
        ("polytope structure", polytope_structure),
        ("distinctness report", distinctness_report),
        ("figure reproduction", figure_reproduction),
        ("property suites", property_suites),
        ("pipeline validation", pipeline_validation),
    ];
    let mut ok = true;
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("PASS {} {name}: {detail}", i + 1),
            Err(why) => {
                ok = false;
                println!("FAIL {} {name}: {why}", i + 1);
            }
        }
    }
    if ok { ExitCode::SUCCESS } else { ExitCode::FAILURE }
}
