use std::fs;

use cyclecones::cone::{ConeJson, PolyCone};
use cyclecones::fixtures::{self, ClaimStatus};
use cyclecones::negdef::PairingBasis;
use cyclecones::projbundle::{BundleClass2D, HNProfile};
use cyclecones::rational::{format_rational, parse_vector, ClassVector, Rational};
use cyclecones::ring::RingPresentation;
use cyclecones::zariski::{preceq_maximum, ConeGeometry, GeometryJson};
use serde_json::{json, Value as Json};

use crate::{
    plot, BckArgs, Command, ConeCommand, DecomposeArgs, DirectedArgs, Failure, FixtureArgs, Output, ProjbundleArgs,
    RingCommand, RingEvalArgs, Status,
};

type Res = Result<Output, Failure>;

pub fn run(cmd: &Command) -> Res {
    match cmd {
        Command::Cone(c) => cone(c),
        Command::Decompose(a) => decompose(a),
        Command::Directed(a) => directed(a),
        Command::Projbundle(a) => projbundle(a),
        Command::Bck(a) => bck(a),
        Command::Ring(RingCommand::Eval(a)) => ring_eval(a),
        Command::Fixture(a) => fixture(a),
    }
}

fn to_json<T: serde::Serialize>(x: &T) -> Json {
    serde_json::to_value(x).expect("results serialize")
}

fn read(path: &str) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::input("io_error", format!("{path}: {e}")))
}

fn parse_json<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    let text = read(path)?;
    serde_json::from_str(&text).map_err(|e| {
        Failure::input(
            "json_error",
            format!("{path}: {e} (line {}, column {})", e.line(), e.column()),
        )
    })
}

fn load_cone(path: &str) -> Result<PolyCone, Failure> {
    let spec: ConeJson = parse_json(path)?;
    Ok(PolyCone::from_json(&spec)?)
}

fn load_geometry(path: &str) -> Result<ConeGeometry, Failure> {
    let spec: GeometryJson = parse_json(path)?;
    Ok(spec.into_geometry()?)
}

fn class_arg(text: &str, basis: &str) -> Result<ClassVector, Failure> {
    Ok(ClassVector::new(basis, parse_vector(text)?))
}

fn canonical(c: &PolyCone) -> Json {
    let mut out = to_json(&c.dd_convert().to_json());
    out["lineality_dim"] = json!(c.lineality_dim());
    out["span_dim"] = json!(c.span_dim());
    out
}

fn cone(cmd: &ConeCommand) -> Res {
    match cmd {
        ConeCommand::Dual(a) => {
            let c = load_cone(&a.input)?;
            Ok(Output::new(json!({ "dual": canonical(&c.dual_cone()) })))
        }
        ConeCommand::Convert(a) => {
            let c = load_cone(&a.input)?;
            let mut out = Output::new(json!({ "cone": canonical(&c) }));
            if !c.representations_agree() {
                out.failure = Some(Failure {
                    status: Status::DomainError,
                    code: "representations_disagree".into(),
                    message: "the supplied generators and inequalities describe different cones".into(),
                });
            }
            Ok(out)
        }
        ConeCommand::Contains(a) => {
            let c = load_cone(&a.input)?;
            let v = class_arg(&a.class, c.basis())?;
            let m = c.contains(&v)?;
            Ok(Output::new(json!({
                "class": to_json(&v),
                "inside": m.is_inside(),
                "certificate": to_json(m.certificate()),
                "verified": m.certificate().verify(),
            })))
        }
        ConeCommand::Rays(a) => {
            let c = load_cone(&a.input)?;
            let frame = c.frame();
            let rows = |m: &[Vec<Rational>]| Json::Array(m.iter().map(|r| to_json(&vec_strings(r))).collect());
            Ok(Output::new(json!({
                "basis": c.basis(),
                "dim": c.dim(),
                "rays": rows(&frame.rays),
                "lineality": rows(&frame.lineality),
                "salient": frame.lineality.is_empty(),
            })))
        }
    }
}

fn vec_strings(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn decompose(a: &DecomposeArgs) -> Res {
    let g = load_geometry(&a.geometry)?;
    let alpha = class_arg(&a.class, g.basis())?;
    let objective = a.objective.as_deref().map(|o| class_arg(o, g.basis())).transpose()?;
    let d = g.decompose(&alpha, objective.as_ref())?;
    let mut out = Output::new(json!({
        "decomposition": to_json(&d),
        "verified": d.verify(),
        "negative_on_boundary": g.negative_boundary_check(&d),
    }));
    out.diagnostics = d.metadata.notes.clone();
    if let Some(path) = &a.plot_section {
        let svg = plot::section_svg(&g, &d)?;
        fs::write(path, svg).map_err(|e| Failure::input("io_error", format!("{path}: {e}")))?;
        out.payload["plot_section"] = json!(path);
    }
    Ok(out)
}

fn directed(a: &DirectedArgs) -> Res {
    let g = load_geometry(&a.geometry)?;
    let alpha = class_arg(&a.class, g.basis())?;
    let s = g.decomposition_polytope(&alpha)?;
    let report = preceq_maximum(&g, &s)?;
    Ok(Output::new(json!({
        "class": to_json(&alpha),
        "vertices": to_json(&s.vertices().unwrap_or_default()),
        "report": to_json(&report),
        "verified": report.verify(),
    })))
}

fn cones_json(h: &HNProfile, k: usize) -> Result<Json, Failure> {
    let c = h.cones(k)?;
    Ok(json!({
        "k": k,
        "eff": canonical(&c.eff),
        "nef": canonical(&c.nef),
        "mov": canonical(&c.mov),
        "coincidence": to_json(&h.cone_coincidence(k)?),
    }))
}

fn projbundle(a: &ProjbundleArgs) -> Res {
    let h = HNProfile::parse(&a.hn)?;
    let table = to_json(&h.table()?);
    match (a.k, &a.class) {
        (None, _) => {
            let cones: Vec<Json> = (1..h.rank()).map(|k| cones_json(&h, k)).collect::<Result<_, _>>()?;
            Ok(Output::new(json!({ "table": table, "cones": cones })))
        }
        (Some(k), None) => Ok(Output::new(json!({ "table": table, "cones": cones_json(&h, k)? }))),
        (Some(k), Some(class)) => {
            let v = parse_vector(class)?;
            if v.len() != 2 {
                return Err(Failure::input("dimension_mismatch", "bundle classes have two coordinates \"x,y\""));
            }
            let alpha = BundleClass2D::new(k, v[0].clone(), v[1].clone());
            let (ea, eb) = h.eff_coordinates(&alpha)?;
            let d = h.zariski_decompose(&alpha)?;
            let mut out = Output::new(json!({
                "table": table,
                "cones": cones_json(&h, k)?,
                "class": to_json(&alpha),
                "eff_coordinates": { "a": format_rational(&ea), "b": format_rational(&eb) },
                "decomposition": to_json(&d),
                "verified": d.verify(),
            }));
            out.diagnostics = d.metadata.notes.clone();
            Ok(out)
        }
    }
}

fn bck(a: &BckArgs) -> Res {
    let basis = PairingBasis::from_json_str(&read(&a.gram)?)?;
    let c = parse_vector(&a.class)?;
    let d = if a.brute_force {
        basis.brute_force(&c)?
    } else {
        basis.decompose(&c)?
    };
    Ok(Output::new(json!({ "decomposition": to_json(&d), "verified": d.verify() })))
}

fn ring_eval(a: &RingEvalArgs) -> Res {
    let ring = match (&a.ring, &a.fixture) {
        (Some(path), _) => RingPresentation::from_json_str(&read(path)?)?,
        (None, Some(name)) => fixtures::load(name)?
            .ring()
            .cloned()
            .ok_or_else(|| Failure::input("invalid_input", format!("fixture `{name}` has no ring")))?,
        (None, None) => return Err(Failure::input("usage", "give --ring or --fixture")),
    };
    let (value, capped) = ring.eval_with_cap(&a.expr)?;
    let mut payload = json!({ "expr": a.expr, "value": to_json(&ring.element(&value)) });
    if let Some(b) = &a.basis {
        payload["coordinates"] = to_json(&ring.coordinates_in(&value, b)?);
    }
    if let Some(p) = &a.pair {
        let other = ring.eval(p)?;
        payload["pairing"] = json!({ "with": p, "value": format_rational(&ring.pair(&value, &other)?) });
    }
    let mut out = Output::new(payload);
    if capped {
        out.diagnostics.push("printed cap relations were applied; see the ring audit".into());
    }
    for f in ring.consistency_audit().flags() {
        out.diagnostics.push(format!("audit {}: {}", f.code, f.message));
    }
    Ok(out)
}

fn fixture(a: &FixtureArgs) -> Res {
    let f = fixtures::load(&a.name)?;
    if !a.verify {
        let claims: Vec<Json> = f
            .claims()
            .iter()
            .map(|c| json!({ "id": c.id, "anchor": c.anchor, "check": c.check, "expected": to_json(&c.expected) }))
            .collect();
        let mut out = Output::new(json!({
            "name": f.name(),
            "description": f.description(),
            "spaces": f.space_names(),
            "cones": f.cone_names(),
            "geometries": f.geometry_names(),
            "profiles": f.profile_names(),
            "claims": claims,
            "audit": f.audit().map(to_json),
        }));
        if let Some(audit) = f.audit() {
            out.diagnostics = audit.flags().iter().map(|x| format!("audit {}: {}", x.code, x.message)).collect();
        }
        return Ok(out);
    }
    let report = fixtures::verify_claims(&f);
    let mut human = String::new();
    for r in &report.results {
        let tag = match r.status {
            ClaimStatus::Pass => "PASS",
            ClaimStatus::Fail => "FAIL",
            ClaimStatus::Flagged => "FLAGGED",
        };
        let note = if r.as_expected { "" } else { " (unexpected)" };
        human.push_str(&format!("{tag:<8}{}{note}: {}\n", r.id, r.message));
    }
    human.push_str(&format!(
        "{}: {} pass, {} flagged, {} fail\n",
        report.fixture,
        report.count(ClaimStatus::Pass),
        report.count(ClaimStatus::Flagged),
        report.count(ClaimStatus::Fail)
    ));
    let mut out = Output::new(to_json(&report));
    out.human = Some(human);
    if !report.all_as_expected {
        let bad: Vec<&str> = report.results.iter().filter(|r| !r.as_expected).map(|r| r.id.as_str()).collect();
        out.failure = Some(Failure {
            status: Status::DomainError,
            code: "claims_failed".into(),
            message: format!("claims not as expected: {}", bad.join(", ")),
        });
    }
    Ok(out)
}
