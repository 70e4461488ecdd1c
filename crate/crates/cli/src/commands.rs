use std::path::Path;

use levelgraph::catalog::CatalogGraph;
use levelgraph::io::{self, GraphDocument, MeshFormat};
use levelgraph::levelset::{self, LevelSurfaceGraph};
use levelgraph::poly::Polynomial;
use levelgraph::rational::{self, Rational};
use levelgraph::refinement::{self, SimplexGraph};
use levelgraph::spectral::{self, NodalOptions, NodalReport};
use levelgraph::topology::{self, DEFAULT_BUDGET};
use levelgraph::variety::{self, Domain, VarietyOptions};
use levelgraph::{lagrange, morse, sard};
use levelgraph::{Error, Result, SimplicialGraph, Verdict, VerificationReport, VertexFunction};
use serde_json::{json, Value};

use crate::{Args, Command, OutputFormat, Status};

pub fn run(args: &Args) -> Result<(Value, Status)> {
    match args.command {
        Command::Verify => verify(args),
        Command::Euler => euler(args),
        Command::Curvature => curvature(args),
        Command::Refine => refine(args),
        Command::Levelset => levelset(args),
        Command::Simultaneous => simultaneous(args),
        Command::Sard => sard(args),
        Command::Lagrange => lagrange(args),
        Command::Variety => variety(args),
        Command::Spectrum => spectrum(args),
        Command::Nodal => nodal(args),
        Command::GroundState => ground_state(args),
        Command::Export => export(args),
    }
}

fn budget(args: &Args) -> u64 {
    args.budget.unwrap_or(DEFAULT_BUDGET)
}

fn seed(args: &Args) -> u64 {
    args.seed.unwrap_or(0)
}

fn load(args: &Args) -> Result<GraphDocument> {
    let source = args.graph.as_deref().ok_or_else(|| Error::InvalidParameters("--graph is required".into()))?;
    if Path::new(source).exists() {
        eprintln!("levelgraph: loading {source}");
        return GraphDocument::load(source);
    }
    match source.parse::<CatalogGraph>() {
        Ok(c) => Ok(GraphDocument::new(c.build()?)),
        Err(_) => Err(Error::InvalidParameters(format!("'{source}' is neither a readable file nor a catalog graph"))),
    }
}

fn function(doc: &GraphDocument, source: &str, index: usize, seed: u64) -> Result<VertexFunction> {
    let n = doc.graph.vertex_count();
    if let Some(f) = doc.functions.get(source) {
        return Ok(f.clone());
    }
    if source == "random" {
        return Ok(VertexFunction::random_injective(n, seed.wrapping_add(index as u64)));
    }
    if source.contains(',') {
        let values = source.split(',').map(rational::parse).collect::<Result<Vec<_>>>()?;
        if values.len() != n {
            return Err(Error::InvalidParameters(format!("{} inline values for {n} vertices", values.len())));
        }
        return Ok(VertexFunction::new(values));
    }
    doc.function(source).cloned()
}

fn functions(args: &Args, doc: &GraphDocument, at_least: usize) -> Result<Vec<VertexFunction>> {
    if args.functions.len() < at_least {
        return Err(Error::InvalidParameters(format!("need at least {at_least} --function")));
    }
    args.functions.iter().enumerate().map(|(i, s)| function(doc, s, i, seed(args))).collect()
}

fn levels(args: &Args, count: usize) -> Result<Vec<Rational>> {
    if args.levels.len() != count {
        return Err(Error::InvalidParameters(format!("{} --level values for {count} functions", args.levels.len())));
    }
    args.levels.iter().map(|s| rational::parse(s)).collect()
}

fn q(x: &Rational) -> Value {
    Value::String(rational::format(x))
}

fn qs(xs: &[Rational]) -> Value {
    Value::Array(xs.iter().map(q).collect())
}

fn status_of(v: Verdict) -> Status {
    match v {
        Verdict::Yes => Status::Ok,
        Verdict::No => Status::VerdictNo,
        Verdict::ResourceLimit => Status::ResourceLimit,
    }
}

fn worst(a: Status, b: Status) -> Status {
    let rank = |s| match s {
        Status::Ok => 0,
        Status::VerdictNo => 1,
        Status::ResourceLimit => 2,
    };
    if rank(b) > rank(a) {
        b
    } else {
        a
    }
}

fn summary(g: &SimplicialGraph) -> Value {
    json!({
        "vertices": g.vertex_count(),
        "edges": g.edge_count(),
        "dimension": g.dimension(),
        "f_vector": g.f_vector(),
        "euler_characteristic": g.euler_characteristic(),
    })
}

fn surface_summary(s: &LevelSurfaceGraph, verification: &VerificationReport) -> Value {
    let mut v = summary(&s.graph);
    v["levels"] = qs(&s.level);
    v["component_sizes"] = json!(s.component_sizes());
    if verification.is_yes() && verification.dimension == Some(1) {
        v["cycle_lengths"] = json!(s.component_sizes());
    }
    v["labels"] = json!(s.graph.labels());
    v["verification"] = json!(verification);
    v
}

fn ambient_dim(g: &SimplicialGraph) -> i64 {
    g.dimension().map_or(-1, |d| d as i64)
}

fn mesh_format(args: &Args) -> OutputFormat {
    args.format.unwrap_or_else(|| match args.out.as_ref().and_then(|p| p.extension()).and_then(|e| e.to_str()) {
        Some("off") => OutputFormat::Off,
        Some("obj") => OutputFormat::Obj,
        _ => OutputFormat::Json,
    })
}

/// Writes `g` (with `functions`) to `--out` when given.
fn write_output(args: &Args, g: &SimplicialGraph, functions: &[(String, VertexFunction)]) -> Result<Option<Value>> {
    let Some(path) = &args.out else {
        return Ok(None);
    };
    let format = mesh_format(args);
    let info = match format {
        OutputFormat::Json => {
            let mut doc = GraphDocument::new(g.clone());
            for (name, f) in functions {
                doc = doc.with_function(name.clone(), f.clone());
            }
            doc.save(path)?;
            json!({ "path": path, "format": "json" })
        }
        OutputFormat::Off | OutputFormat::Obj => {
            let mf = if format == OutputFormat::Off { MeshFormat::Off } else { MeshFormat::Obj };
            let mesh = io::export_graph_mesh(g, mf, budget(args))?;
            std::fs::write(path, &mesh.text)?;
            json!({
                "path": path,
                "format": if mf == MeshFormat::Off { "off" } else { "obj" },
                "vertices": mesh.vertices,
                "faces": mesh.faces,
                "segments": mesh.segments,
                "orientable": mesh.orientable,
            })
        }
    };
    eprintln!("levelgraph: wrote {}", path.display());
    Ok(Some(info))
}

fn verify(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let g = &doc.graph;
    let d = args.dim.unwrap_or_else(|| ambient_dim(g));
    let dgraph = topology::is_dgraph(g, d, budget(args));
    let sphere = dgraph.is_yes().then(|| topology::is_sphere(g, d, budget(args)));
    let report = json!({
        "dimension": d,
        "graph": summary(g),
        "dgraph": json!(&dgraph),
        "sphere": sphere.as_ref().map(|x| json!(x)),
    });
    Ok((report, status_of(dgraph.verdict)))
}

fn euler(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    Ok((summary(&doc.graph), Status::Ok))
}

fn curvature(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let g = &doc.graph;
    let k = morse::curvature(g);
    let chi = g.euler_characteristic();
    let mut report = json!({
        "curvature": json!(&k),
        "euler_characteristic": chi,
        "gauss_bonnet": k.total == rational::int(chi),
    });
    if let Some(source) = args.functions.first() {
        let f = function(&doc, source, 0, seed(args))?;
        let (sum, _) = morse::ph_sum_check(g, &f)?;
        let (sym, _) = morse::symmetric_sum_check(g, &f)?;
        let indices = g
            .vertices()
            .map(|x| {
                morse::ph_index_with_budget(g, &f, x, budget(args)).map(|r| {
                    json!({
                        "vertex": x,
                        "index": r.index,
                        "symmetric": q(&r.symmetric),
                        "classification": json!(&r.classification),
                    })
                })
            })
            .collect::<Result<Vec<_>>>()?;
        report["indices"] = Value::Array(indices);
        report["index_sum"] = json!(sum);
        report["symmetric_sum"] = q(&sym);
        report["poincare_hopf"] = json!(sum == chi);
    }
    if let Some(x) = args.vertex {
        g.check_vertex(x)?;
        let exact = if g.degree(x) <= 24 { Some(q(&morse::exact_index_average(g, x)?)) } else { None };
        let mc = morse::index_expectation(g, x, args.samples, seed(args))?;
        report["vertex"] = json!({
            "vertex": x,
            "curvature": q(&k.values[x as usize]),
            "exact_average": exact,
            "monte_carlo": json!(&mc),
        });
    }
    Ok((report, Status::Ok))
}

fn refine(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let r = refinement::barycentric(&doc.graph);
    let colors = refinement::dimension_coloring(&r);
    let (ncolors, proper) = refinement::coloring_summary(r.graph(), &colors);
    let extended = doc
        .functions
        .iter()
        .map(|(name, f)| Ok((name.clone(), refinement::extend_function(f, &r)?)))
        .collect::<Result<Vec<_>>>()?;
    let out = write_output(args, &r.graph, &extended)?;
    let report = json!({
        "parent": summary(&doc.graph),
        "refined": summary(&r.graph),
        "coloring": { "colors": ncolors, "proper": proper },
        "output": out,
    });
    Ok((report, Status::Ok))
}

fn levelset(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let f = functions(args, &doc, 1)?.remove(0);
    let c = levels(args, 1)?.remove(0);
    let s = levelset::level_surface(&doc.graph, &f, &c)?;
    let ver = topology::is_dgraph(&s.graph, ambient_dim(&doc.graph) - 1, budget(args));
    let mut report = surface_summary(&s, &ver);
    report["output"] = json!(write_output(args, &s.graph, &[])?);
    Ok((report, status_of(ver.verdict)))
}

fn simultaneous(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let fs = functions(args, &doc, 1)?;
    let cs = levels(args, fs.len())?;
    let rank = lagrange::max_rank_check(&doc.graph, &fs, &cs)?;
    let s = levelset::simultaneous_locus(&doc.graph, &fs, &cs)?;
    let ver = topology::is_dgraph(&s.graph, ambient_dim(&doc.graph) - fs.len() as i64, budget(args));
    let mut report = surface_summary(&s, &ver);
    report["max_rank"] = json!(&rank);
    report["output"] = json!(write_output(args, &s.graph, &[])?);
    Ok((report, status_of(ver.verdict)))
}

fn sard(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let fs = functions(args, &doc, 1)?;
    let cs = levels(args, fs.len())?;
    let trace = sard::sard_pipeline(&doc.graph, &fs, &cs, budget(args))?;
    let mut status = Status::Ok;
    let stages: Vec<Value> = trace
        .stages
        .iter()
        .enumerate()
        .map(|(i, st)| {
            status = worst(status, status_of(st.verification.verdict));
            let mut v = surface_summary(&st.surface, &st.verification);
            v["stage"] = json!(i + 1);
            v["level"] = q(&st.level);
            v["extended_values"] = qs(st.extended.values());
            v["excluded_values"] = qs(&st.excluded_values);
            v
        })
        .collect();
    let report = json!({
        "dimension": trace.dimension,
        "extension_rule": sard::SardTrace::EXTENSION_RULE,
        "stages": stages,
        "all_verified": trace.all_verified(),
        "output": write_output(args, trace.final_graph(), &[])?,
    });
    Ok((report, status))
}

fn lagrange(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let fs = functions(args, &doc, 2)?;
    let g = &doc.graph;
    let candidates: Vec<Value> = lagrange::lagrange_candidates(g, &fs[0], &fs[1])
        .iter()
        .map(|s| json!({ "simplex": json!(s), "label": refinement::simplex_label(g, s) }))
        .collect();
    let injectivity = lagrange::strong_injectivity_check(g, &fs, lagrange::InjectivityScope::PerSimplex);
    let mut report = json!({
        "candidates": candidates,
        "strong_injectivity": json!(&injectivity),
    });
    if !args.levels.is_empty() {
        let cs = levels(args, fs.len())?;
        report["max_rank"] = json!(&lagrange::max_rank_check(g, &fs, &cs)?);
    }
    Ok((report, Status::Ok))
}

fn variety(args: &Args) -> Result<(Value, Status)> {
    if args.polys.is_empty() {
        return Err(Error::InvalidParameters("need at least one --poly".into()));
    }
    let polys = args.polys.iter().map(|p| Polynomial::parse(p)).collect::<Result<Vec<_>>>()?;
    let domain: Domain =
        args.domain.as_deref().ok_or_else(|| Error::InvalidParameters("--domain is required".into()))?.parse()?;
    let step = rational::parse(args.step.as_deref().unwrap_or("1/4"))?;
    let opts = VarietyOptions { step, periodic: args.periodic, perturb: !args.exact, budget: budget(args) };
    let v = variety::triangulate_variety(&polys, &domain, &opts)?;
    let last = v.trace.stages.last().expect("at least one stage");
    let target = domain.dim() as i64 - polys.len() as i64;
    let report = json!({
        "domain": domain.to_string(),
        "grid": summary(&v.grid),
        "levels": qs(&v.levels),
        "perturbed": v.perturbed(),
        "stages": v.trace.stages.iter().map(|st| json!({
            "level": q(&st.level),
            "vertices": st.surface.graph.vertex_count(),
            "verification": json!(&st.verification),
        })).collect::<Vec<_>>(),
        "result": surface_summary(&last.surface, &last.verification),
        "verdict": format!("{target}-graph: {}", verdict_word(last.verification.verdict)),
        "output": write_output(args, v.graph(), &[])?,
    });
    Ok((report, status_of(last.verification.verdict)))
}

fn verdict_word(v: Verdict) -> &'static str {
    match v {
        Verdict::Yes => "yes",
        Verdict::No => "no",
        Verdict::ResourceLimit => "resource_limit",
    }
}

fn spectrum(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let s = spectral::spectrum(&doc.graph, args.tol.unwrap_or(spectral::DEFAULT_TOL))?;
    let mut report = json!(&s);
    let principle = spectral::eigenfunction_principle_check(&doc.graph, &s);
    report["eigenfunction_principle"] = json!(&principle);
    Ok((report, Status::Ok))
}

fn nodal_options(args: &Args) -> NodalOptions {
    NodalOptions { perturbation_seed: args.seed, ..NodalOptions::default() }
}

fn nodal_json(r: &NodalReport, budget: u64) -> (Value, VerificationReport) {
    let d = ambient_dim(&r.nodal_surface.parent);
    let ver = topology::is_dgraph(&r.nodal_surface.graph, d - 1, budget);
    let v = json!({
        "k": r.k,
        "eigenvalue": r.eigenvalue,
        "positive_components": r.positive_components,
        "negative_components": r.negative_components,
        "courant_bound_holds": r.positive_components < r.k,
        "zero_vertices": r.zero_vertices,
        "perturbation_seed": r.perturbation_seed,
        "cheeger": r.cheeger.as_ref().map(q),
        "crossing_edges": r.crossing_edges,
        "nodal_surface": surface_summary(&r.nodal_surface, &ver),
    });
    (v, ver)
}

fn nodal(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let r = spectral::nodal_report(&doc.graph, args.k, &nodal_options(args))?;
    let (mut report, _) = nodal_json(&r, budget(args));
    report["output"] = json!(write_output(args, &r.nodal_surface.graph, &[])?);
    Ok((report, Status::Ok))
}

fn ground_state(args: &Args) -> Result<(Value, Status)> {
    let doc = load(args)?;
    let gs = spectral::ground_state_surface(&doc.graph, &nodal_options(args), budget(args))?;
    let (nodal, _) = nodal_json(&gs.report, budget(args));
    let report = json!({
        "nodal": nodal,
        "spectral_gap": gs.spectral_gap,
        "sphere": json!(&gs.sphere),
        "double_nodal": gs.double_nodal.as_ref().map(|d| json!({
            "error": d.error,
            "components": d.components,
            "verification": d.verification.as_ref().map(|x| json!(x)),
        })),
        "output": write_output(args, &gs.report.nodal_surface.graph, &[])?,
    });
    Ok((report, status_of(gs.sphere.verdict)))
}

fn export(args: &Args) -> Result<(Value, Status)> {
    if args.out.is_none() {
        return Err(Error::InvalidParameters("export needs --out".into()));
    }
    let doc = load(args)?;
    let (g, names) = if args.functions.is_empty() {
        let named: Vec<(String, VertexFunction)> = doc.functions.iter().map(|(k, v)| (k.clone(), v.clone())).collect();
        (doc.graph.clone(), named)
    } else {
        let fs = functions(args, &doc, 1)?;
        let cs = levels(args, fs.len())?;
        let s = if fs.len() == 1 {
            levelset::level_surface(&doc.graph, &fs[0], &cs[0])?
        } else {
            levelset::simultaneous_locus(&doc.graph, &fs, &cs)?
        };
        (s.graph, Vec::new())
    };
    let out = write_output(args, &g, &names)?;
    Ok((json!({ "graph": summary(&g), "output": out }), Status::Ok))
}
