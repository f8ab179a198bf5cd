use std::collections::BTreeMap;

use descentlab::complexes::{colimit_homology, complete, homology, telescope, ChainMap, Complex, HomologyCoeff, HomologyReport, JsonCoeff};
use descentlab::descent::{self, cech, check_tot_cech, check_tw_tot, inclusion_exclusion, required_cutoff, verify_descent, CoverPresheaf};
use descentlab::exec::Execution;
use descentlab::involutive::{
    check_composition_lemma, check_weak_cover_conditions, random_commuting_family, CoverExpr, CoverFunction, Grid, PolyFunction, Region,
};
use descentlab::operad_alg::{
    bv_axiom_report, cech_cup, compare_products, p1_polyvector_presheaf, tw_product, BvOperator, CdgaPresheaf, PolyvectorBv, CHART_X, CHART_Y,
    OVERLAP,
};
use descentlab::scalars::{NovikovElem, Rational};
use serde_json::Value;

use crate::fixtures::{novikov_telescope, Diagram};
use crate::report::{Check, Report};
use crate::{CliError, Command, Options};

fn read_input(opts: &Options) -> Result<Value, CliError> {
    let path = opts.input.as_ref().ok_or_else(|| CliError::Input("--input is required for this command".into()))?;
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))
}

fn load_presheaf(opts: &Options) -> Result<CoverPresheaf, CliError> {
    CoverPresheaf::from_json(&read_input(opts)?).map_err(|e| CliError::Input(e.to_string()))
}

fn is_novikov(v: &Value) -> bool {
    v.get("coeff").is_some_and(|c| c.get("novikov").is_some())
}

fn betti_in_window(h: &HomologyReport, window: Option<(i32, i32)>) -> Value {
    let rows: Vec<Value> = h
        .degrees
        .iter()
        .filter(|d| window.is_none_or(|(lo, hi)| (lo..=hi).contains(&d.degree)))
        .map(|d| serde_json::json!({"degree": d.degree, "free_rank": d.free_rank, "torsion": d.torsion}))
        .collect();
    Value::Array(rows)
}

fn betti_window(b: &BTreeMap<i32, usize>, window: Option<(i32, i32)>) -> BTreeMap<i32, usize> {
    b.iter().filter(|(n, _)| window.is_none_or(|(lo, hi)| (lo..=hi).contains(*n))).map(|(n, v)| (*n, *v)).collect()
}

pub fn run(cmd: Command, opts: &Options, exec: Execution) -> Result<Report, CliError> {
    let mut r = Report::new(cmd.name(), opts.seed, opts.input.as_ref().map(|p| p.display().to_string()));
    if let Some((lo, hi)) = opts.degree_window {
        r.option("degree_window", [lo, hi]);
    }
    match cmd {
        Command::Validate => validate(&mut r, opts)?,
        Command::Homology => {
            let v = read_input(opts)?;
            if is_novikov(&v) {
                homology_of::<NovikovElem>(&mut r, &v, opts)?
            } else {
                homology_of::<Rational>(&mut r, &v, opts)?
            }
        }
        Command::Cech => {
            let f = load_presheaf(opts)?;
            let nerve = descent::nerve(&f).map_err(CliError::math)?;
            let ids = nerve.cosimplicial.check_identities();
            r.check(Check::new("cosimplicial identities", "semi-cosimplicial-nerve", ids.is_ok()).witness(ids.err().map(|e| e.to_string())));
            let c = cech(&f).map_err(CliError::math)?;
            let sq = c.complex().validate();
            r.check(Check::new("Čech D² = 0", "cech-differential", sq.is_ok()).witness(sq.err().map(|e| e.to_string())));
            let dims: BTreeMap<i32, usize> = c.complex().degrees().map(|n| (n, c.complex().dim(n))).collect();
            r.result("members", f.n());
            r.result("dims", betti_window(&dims, opts.degree_window));
            r.result("betti", betti_window(&homology(c.complex()).betti(), opts.degree_window));
        }
        Command::Tot => {
            let f = load_presheaf(opts)?;
            let cert = check_tot_cech(&f, exec).map_err(CliError::math)?;
            r.check(Check::new("Tot → Čech is bijective", "tot-cech-isomorphism", cert.bijective));
            r.check(Check::new("Tot → Čech is a chain map", "tot-cech-isomorphism", cert.chain_map));
            r.check(Check::new("augmentations intertwined", "tot-augmentation", cert.intertwines_augmentations));
            r.result("tot_betti", betti_window(&cert.tot_betti, opts.degree_window));
            r.result("cech_betti", betti_window(&cert.cech_betti, opts.degree_window));
        }
        Command::Tw => {
            let f = load_presheaf(opts)?;
            let dc = descent::nerve(&f).map_err(CliError::math)?.cosimplicial;
            let p = opts.weight_cutoff.unwrap_or_else(|| required_cutoff(&dc).max(f.n()));
            if p < required_cutoff(&dc) {
                return Err(CliError::Range(format!("--weight-cutoff {p} is below the Whitney weight {}", required_cutoff(&dc))));
            }
            r.option("weight_cutoff", p);
            let cert = check_tw_tot(&f, &[p, p + 1], exec).map_err(CliError::math)?;
            for (k, cut) in cert.cutoffs.iter().enumerate() {
                r.check(Check::new(format!("TW(P={cut}) → Tot quasi-isomorphism"), "tw-integration-map", cert.quasi_iso[k]));
                r.check(Check::new(format!("TW(P={cut}) augmentation commutes"), "tw-integration-map", cert.augmentations_commute[k]));
                r.check(Check::new(format!("I∘E = id at P={cut}"), "whitney-section", cert.section_identity[k]));
            }
            r.check(Check::new("Betti tables stable in P", "tw-integration-map", cert.stable));
            r.result("tot_betti", betti_window(&cert.tot_betti, opts.degree_window));
            r.result("tw_betti", cert.tw_betti.iter().map(|b| betti_window(b, opts.degree_window)).collect::<Vec<_>>());
        }
        Command::Compare => {
            let cdga = CdgaPresheaf::from_json(&read_input(opts)?).map_err(|e| CliError::Input(e.to_string()))?;
            let p = opts.weight_cutoff.unwrap_or_else(|| cdga.presheaf().n().saturating_sub(1).max(1));
            r.option("weight_cutoff", p);
            let alg = tw_product(&cdga, p, exec).map_err(CliError::math)?;
            let comm = alg.check_commutative(p).map_err(CliError::math)?;
            let assoc = alg.check_associative(p).map_err(CliError::math)?;
            let leib = alg.check_leibniz(p).map_err(CliError::math)?;
            r.check(Check::new("TW product graded-commutative", "tw-symmetric-monoidal", comm.passed).witness(comm.witness));
            r.check(Check::new("TW product associative", "tw-symmetric-monoidal", assoc.passed).witness(assoc.witness));
            r.check(Check::new("TW product Leibniz", "tw-symmetric-monoidal", leib.passed).witness(leib.witness));
            let cmp = compare_products(&cdga, p, exec).map_err(CliError::math)?;
            r.check(Check::new("homology products agree", "cech-product-transport", cmp.agree.passed).witness(cmp.agree.witness.clone()));
            r.check(Check::new("Čech cup associative", "cech-product-transport", cmp.cup_associative.passed).witness(cmp.cup_associative.witness.clone()));
            r.check(
                Check::new("cup graded-commutative on homology", "cech-product-transport", cmp.cup_commutative_on_homology.passed)
                    .witness(cmp.cup_commutative_on_homology.witness.clone()),
            );
            let cup = cech_cup(&cdga).map_err(CliError::math)?;
            r.result("cech_cup_noncommutativity_witness", cup.commutativity_witness().map_err(CliError::math)?);
            r.result("products_checked", cmp.agree.checked);
        }
        Command::Descent => {
            let f = load_presheaf(opts)?;
            let rep = verify_descent(&f).map_err(CliError::math)?;
            let w = rep.witness_degree.map(|n| format!("cone homology in degree {n}"));
            r.check(Check::new("F(K) → Čech(F) quasi-isomorphism", "cech-descent", rep.holds).witness(w));
            r.result("global_betti", betti_window(&rep.global_betti, opts.degree_window));
            r.result("cech_betti", betti_window(&rep.cech_betti, opts.degree_window));
            r.result("witness_degree", rep.witness_degree);
        }
        Command::InclExcl => {
            let f = load_presheaf(opts)?;
            let cert = inclusion_exclusion(&f).map_err(|e| match e {
                descent::DescentError::BadCover(m) => CliError::Input(m),
                e => CliError::math(e),
            })?;
            r.check(Check::new("cocone ≅ Čech bijective", "cocone-inclusion-exclusion", cert.bijective));
            r.check(Check::new("cocone ≅ Čech chain map", "cocone-inclusion-exclusion", cert.chain_map));
            r.result("cocone_betti", betti_window(&cert.cocone_betti, opts.degree_window));
            r.result("cech_betti", betti_window(&cert.cech_betti, opts.degree_window));
        }
        Command::BvCheck => {
            let desc = if opts.input.is_some() { read_input(opts)? } else { crate::fixtures::emit_fixture("bv-polynomial", opts)? };
            let bv = bv_from_json(&desc)?;
            let rep = bv_axiom_report(&bv, exec).map_err(CliError::math)?;
            for a in &rep.axioms {
                r.check(Check::new(a.axiom.clone(), "bv-axioms", a.passed).witness(a.witness.as_ref().map(|w| w.join(", "))));
            }
            r.result("ring", &rep.ring);
            r.result("operator", rep.operator);
            r.result("basis_size", rep.basis_size);
            r.result("checked", rep.axioms.iter().map(|a| (a.axiom.clone(), a.checked)).collect::<BTreeMap<_, _>>());
        }
        Command::P1Demo => {
            let d = opts.laurent_cutoff;
            r.option("laurent_cutoff", d);
            let p = p1_polyvector_presheaf(d).map_err(CliError::math)?;
            let h = p.cohomology().map_err(CliError::math)?;
            let want: BTreeMap<usize, BTreeMap<i32, usize>> = BTreeMap::from([(0, BTreeMap::from([(0, 1)])), (1, BTreeMap::from([(0, 3)]))]);
            r.check(Check::new("Čech cohomology of polyvectors", "p1-polyvector-cohomology", h == want).witness(Some(format!("{h:?}"))));
            for (j, name) in [(CHART_X, "chart x"), (CHART_Y, "chart y"), (OVERLAP, "overlap")] {
                let rep = bv_axiom_report(&p.bv(j), exec).map_err(CliError::math)?;
                let failed = rep.axioms.iter().find(|a| !a.passed).map(|a| a.axiom.clone());
                r.check(Check::new(format!("BV axioms on {name}"), "bv-axioms", rep.passed()).witness(failed));
            }
            r.result("cohomology", &h);
            r.result(
                "delta_discrepancy",
                [CHART_X, CHART_Y].iter().map(|j| p.delta_discrepancy(*j)).collect::<Result<Vec<_>, _>>().map_err(CliError::math)?,
            );
        }
        Command::CoversCheck => covers_check(&mut r, opts, exec)?,
        Command::Telescope => {
            if opts.input.is_some() {
                let v = read_input(opts)?;
                let novikov = v.get("diagram").and_then(|d| d.get(0)).is_some_and(is_novikov);
                if novikov {
                    let (dg, ms) = load_diagram::<NovikovElem>(&v)?;
                    telescope_of(&mut r, &dg, &ms, opts, exec)?
                } else {
                    let (dg, ms) = load_diagram::<Rational>(&v)?;
                    telescope_of(&mut r, &dg, &ms, opts, exec)?
                }
            } else {
                r.option("novikov_den", opts.novikov_den);
                r.option("novikov_e", &opts.novikov_e);
                let (dg, ms) = novikov_telescope(opts.novikov_den, &opts.novikov_e)?;
                telescope_of(&mut r, &dg, &ms, opts, exec)?;
            }
        }
    }
    Ok(r)
}

fn validate(r: &mut Report, opts: &Options) -> Result<(), CliError> {
    let v = read_input(opts)?;
    let (kind, res): (&str, Result<(), String>) = if v.get("products").is_some() {
        ("cdga-presheaf", CdgaPresheaf::from_json(&v).map(|_| ()).map_err(|e| e.to_string()))
    } else if v.get("values").is_some() {
        ("cover-presheaf", CoverPresheaf::from_json(&v).map(|_| ()).map_err(|e| e.to_string()))
    } else if v.get("dims").is_some() {
        if is_novikov(&v) {
            ("complex", Complex::<NovikovElem>::from_json(&v).map(|_| ()).map_err(|e| e.to_string()))
        } else {
            ("complex", Complex::<Rational>::from_json(&v).map(|_| ()).map_err(|e| e.to_string()))
        }
    } else {
        return Err(CliError::Input("unrecognised input: expected a complex, cover presheaf or CDGA presheaf".into()));
    };
    if let Err(msg) = &res {
        if msg.starts_with("malformed input") || msg.starts_with("cannot parse") {
            return Err(CliError::Input(msg.clone()));
        }
    }
    r.result("kind", kind);
    let anchor = match kind {
        "complex" => "chain-complex",
        "cover-presheaf" => "cover-presheaf",
        _ => "cdga-presheaf",
    };
    r.check(Check::new("well-formed", anchor, res.is_ok()).witness(res.err()));
    Ok(())
}

fn homology_of<S: HomologyCoeff + JsonCoeff>(r: &mut Report, v: &Value, opts: &Options) -> Result<(), CliError> {
    if v.get("dims").is_none() {
        return Err(CliError::Input("expected a complex with a `dims` object".into()));
    }
    let c = Complex::<S>::from_json(v).map_err(|e| CliError::Input(e.to_string()))?;
    r.check(Check::new("d² = 0", "chain-complex", c.validate().is_ok()));
    let h = homology(&c);
    r.result("ring", &h.ring);
    r.result("homology", betti_in_window(&h, opts.degree_window));
    r.result("euler_characteristic", h.euler_characteristic());
    Ok(())
}

fn load_diagram<S: JsonCoeff>(v: &Value) -> Result<Diagram<S>, CliError> {
    let bad = |m: &str| CliError::Input(m.to_string());
    let dg = v.get("diagram").and_then(Value::as_array).ok_or_else(|| bad("diagram must be an array of complexes"))?;
    let dg: Vec<Complex<S>> = dg.iter().map(Complex::from_json).collect::<Result<_, _>>().map_err(|e| CliError::Input(e.to_string()))?;
    let ms = v.get("maps").and_then(Value::as_array).ok_or_else(|| bad("maps must be an array of chain maps"))?;
    if ms.len() + 1 != dg.len() {
        return Err(bad("a diagram of L + 1 complexes needs L maps"));
    }
    let ms = ms
        .iter()
        .enumerate()
        .map(|(i, m)| ChainMap::from_json(&dg[i], &dg[i + 1], m))
        .collect::<Result<_, _>>()
        .map_err(|e| CliError::Input(e.to_string()))?;
    Ok((dg, ms))
}

fn telescope_of<S: HomologyCoeff + JsonCoeff>(
    r: &mut Report,
    dg: &[Complex<S>],
    ms: &[ChainMap<S>],
    opts: &Options,
    exec: Execution,
) -> Result<(), CliError> {
    let tel = telescope(dg, ms).map_err(CliError::math)?;
    r.check(Check::new("telescope d² = 0", "telescope-model", tel.validate().is_ok()));
    let h_tel = homology(&tel);
    let h_last = homology(dg.last().expect("nonempty diagram"));
    let same = h_tel.degrees.iter().chain(&h_last.degrees).all(|d| h_tel.free_rank(d.degree) == h_last.free_rank(d.degree) && h_tel.torsion(d.degree) == h_last.torsion(d.degree));
    r.check(Check::new("H(telescope) = H(last stage)", "telescope-model", same));
    let col = colimit_homology(dg, ms, exec).map_err(CliError::math)?;
    r.result("telescope_homology", betti_in_window(&h_tel, opts.degree_window));
    r.result("colimit_homology", betti_in_window(&col.colimit, opts.degree_window));
    r.result("pure_torsion", col.is_pure_torsion());
    r.result("tail_iterations", col.tail_iterations);
    if let Ok(done) = complete(&tel) {
        r.result("completed_at", done.completed_at());
    }
    Ok(())
}

fn bv_from_json(v: &Value) -> Result<PolyvectorBv, CliError> {
    let bad = |m: &str| CliError::Input(m.to_string());
    let vars = v.get("vars").and_then(Value::as_u64).ok_or_else(|| bad("vars must be a positive integer"))? as usize;
    if !(1..=3).contains(&vars) {
        return Err(CliError::Range(format!("vars = {vars} outside 1..=3")));
    }
    let bv = match v.get("ring").and_then(Value::as_str).unwrap_or("polynomial") {
        "polynomial" => {
            let d = v.get("max_degree").and_then(Value::as_u64).ok_or_else(|| bad("max_degree must be a non-negative integer"))?;
            if d > 4 {
                return Err(CliError::Range(format!("max_degree = {d} outside 0..=4")));
            }
            PolyvectorBv::polynomial(vars, d as i32)
        }
        "laurent" => {
            let range = v.get("range").and_then(Value::as_array).filter(|a| a.len() == 2).ok_or_else(|| bad("range must be [lo, hi]"))?;
            let (lo, hi) = (range[0].as_i64().ok_or_else(|| bad("range must be integers"))?, range[1].as_i64().ok_or_else(|| bad("range must be integers"))?);
            if lo > hi || lo < -4 || hi > 4 {
                return Err(CliError::Range(format!("range [{lo}, {hi}] outside [-4, 4]")));
            }
            PolyvectorBv::laurent(vars, lo as i32, hi as i32)
        }
        other => return Err(bad(&format!("unknown ring `{other}`"))),
    };
    let op = match v.get("operator") {
        None => BvOperator::Divergence,
        Some(Value::String(s)) if s == "divergence" => BvOperator::Divergence,
        Some(o) => match o.get("drop_term").and_then(Value::as_u64) {
            Some(k) if (k as usize) < vars => BvOperator::DropTerm { var: k as usize },
            _ => return Err(bad("operator must be \"divergence\" or {\"drop_term\": k}")),
        },
    };
    Ok(bv.with_operator(op))
}

fn region_from_json(n: usize, v: &Value) -> Result<Region, CliError> {
    let bad = || CliError::Input(format!("bad region {v}"));
    let poly = |s: &Value| -> Result<PolyFunction, CliError> {
        PolyFunction::parse(n, s.as_str().ok_or_else(bad)?).map_err(|e| CliError::Input(e.to_string()))
    };
    let list = |s: &Value| -> Result<Vec<Region>, CliError> { s.as_array().ok_or_else(bad)?.iter().map(|x| region_from_json(n, x)).collect() };
    let obj = v.as_object().filter(|o| o.len() == 1).ok_or_else(bad)?;
    let (k, body) = obj.iter().next().expect("one entry");
    Ok(match k.as_str() {
        "le" => Region::NonPositive(poly(body)?),
        "lt" => Region::Negative(poly(body)?),
        "all" => Region::All(list(body)?),
        "any" => Region::Any(list(body)?),
        _ => return Err(bad()),
    })
}

fn covers_check(r: &mut Report, opts: &Options, exec: Execution) -> Result<(), CliError> {
    let v = read_input(opts)?;
    let bad = |m: &str| CliError::Input(m.to_string());
    let n = v.get("dof").and_then(Value::as_u64).ok_or_else(|| bad("dof must be a positive integer"))? as usize;
    if !(1..=3).contains(&n) {
        return Err(CliError::Range(format!("dof = {n} outside 1..=3")));
    }
    let sets = v.get("sets").and_then(Value::as_array).ok_or_else(|| bad("sets must be an array"))?;
    let mut seqs = Vec::new();
    let mut regions = Vec::new();
    for s in sets {
        regions.push(region_from_json(n, s.get("region").ok_or_else(|| bad("set without region"))?)?);
        let fs = s.get("functions").and_then(Value::as_array).ok_or_else(|| bad("set without functions"))?;
        let fs: Vec<PolyFunction> = fs
            .iter()
            .map(|f| PolyFunction::parse(n, f.as_str().unwrap_or("")).map_err(|e| CliError::Input(e.to_string())))
            .collect::<Result<_, _>>()?;
        seqs.push(fs);
    }
    let grid: Grid = serde_json::from_value(v.get("grid").cloned().unwrap_or(Value::Null)).map_err(|e| CliError::Input(format!("grid: {e}")))?;
    let grid = Grid::new(grid.axes).map_err(|e| CliError::Range(e.to_string()))?;
    let mut all: Vec<Vec<CoverFunction>> = seqs.iter().map(|s| s.iter().cloned().map(CoverFunction::Poly).collect()).collect();
    let mut targets = regions.clone();
    let mut labels: Vec<String> = (1..=seqs.len()).map(|m| format!("K{m}")).collect();
    if let Some(combine) = v.get("combine").and_then(Value::as_array) {
        for c in combine {
            let expr: CoverExpr = serde_json::from_value(c.clone()).map_err(|e| CliError::Input(format!("combine: {e}")))?;
            all.push(expr.functions(&seqs).map_err(|e| CliError::Input(e.to_string()))?);
            targets.push(expr.region(&regions).map_err(|e| CliError::Input(e.to_string()))?);
            labels.push(format!("{expr:?}").replace("Set(", "K(").chars().filter(|c| !c.is_whitespace()).collect());
        }
    }
    let rep = check_weak_cover_conditions(&all, &targets, &grid, exec).map_err(|e| CliError::Input(e.to_string()))?;
    for b in &rep.bullets {
        r.check(Check::new(b.bullet, "weakly-poisson-commuting", b.passed()).witness(b.witness.clone()));
    }
    let (fs, g1, g2) = random_commuting_family(opts.seed);
    let lemma = check_composition_lemma(&fs, &g1, &g2);
    r.check(Check::new("composites of commuting functions commute", "poisson-composition", lemma.is_ok()).witness(lemma.err().map(|e| e.to_string())));
    r.result("points", rep.points);
    r.result("exact", rep.exact);
    r.result("sets", labels);
    r.result("checked", rep.bullets.iter().map(|b| (b.bullet, b.checked)).collect::<BTreeMap<_, _>>());
    Ok(())
}
