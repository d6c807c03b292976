//! `twc`: command-line front end. Exit codes: 0 pass, 1 check failure, 2 usage or parse error.

use std::path::Path;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use twc_core::check::{self, Config, Suite};
use twc_core::confl::{self, Canonical};
use twc_core::error::Error;
use twc_core::io::{self, Workspace, FIELD_ENV};
use twc_core::scalar::Field;
use twc_core::section::SectionAlgebra;
use twc_core::tri::{self, Mutation, Triangle};
use twc_core::tw::{self, Obj, TwMor};
use twc_core::examples;

#[derive(Parser)]
#[command(name = "twc", version, about = "Twisted complexes over strictly unital b-algebras")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Clone)]
struct Knobs {
    /// Seed of the case generator.
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Fuzz cases per identity and algebra.
    #[arg(long, default_value_t = 100)]
    cases: usize,
    /// Bound on the total dimension of generated modules.
    #[arg(long, default_value_t = 4)]
    dims: usize,
    /// Shift window `|s| ≤ W` for exhaustive hat checks.
    #[arg(long, default_value_t = 3)]
    window: i64,
}

#[derive(Subcommand)]
enum Cmd {
    /// Stasheff relations and unit conditions of an algebra (a `.twc` file or E1, E2, E3).
    CheckAlgebra { input: String },
    /// Hat-algebra identities over all shift profiles in the window.
    HatCheck {
        input: String,
        #[arg(long, default_value_t = 3)]
        window: i64,
    },
    /// Validate the twisted objects and morphisms of a file.
    TwValidate { input: String },
    /// Conflation calculus.
    #[command(subcommand)]
    Confl(ConflCmd),
    /// Triangulated structure.
    #[command(subcommand)]
    Tri(TriCmd),
    /// Every invariant suite on the shipped examples.
    Selftest(Knobs),
    /// Seeded fuzz suites.
    Fuzz {
        #[command(flatten)]
        knobs: Knobs,
        /// Run one suite only.
        #[arg(long)]
        suite: Option<String>,
    },
}

#[derive(Args)]
struct Ext {
    input: String,
    /// Object X.
    #[arg(long)]
    x: String,
    /// Object Y.
    #[arg(long)]
    y: String,
    /// Corner γ: Y → X.
    #[arg(long)]
    gamma: String,
}

#[derive(Subcommand)]
enum ConflCmd {
    /// Build the canonical conflation X → E → Y with corner γ.
    Make(Ext),
    /// Validate a canonical conflation; with `--other`, decide equivalence to a second corner.
    Check {
        #[command(flatten)]
        ext: Ext,
        #[arg(long)]
        other: Option<String>,
    },
    /// Pushout along h: X → X'.
    Push {
        #[command(flatten)]
        ext: Ext,
        #[arg(long)]
        along: String,
    },
    /// Pullback along h: Y' → Y.
    Pull {
        #[command(flatten)]
        ext: Ext,
        #[arg(long)]
        along: String,
    },
    /// The conflation of a class h: Y → X[1].
    Psi {
        input: String,
        #[arg(long)]
        x: String,
        #[arg(long)]
        class: String,
    },
    /// The cone conflation of a cocycle f.
    Cone {
        input: String,
        #[arg(long)]
        mor: String,
    },
    /// The rotation conflation E → J(X) ⊕ Y → X[1].
    Rotate(Ext),
}

#[derive(Args)]
struct TriArgs {
    /// A `.twc` file or E1, E2, E3.
    #[arg(default_value = "E3")]
    input: String,
    /// Morphism u: X → Y (fuzzed from the seed when omitted).
    #[arg(long)]
    u: Option<String>,
    /// Morphism v: Y → W (fuzzed from the seed when omitted).
    #[arg(long)]
    v: Option<String>,
    #[command(flatten)]
    knobs: Knobs,
}

#[derive(Subcommand)]
enum TriCmd {
    /// The triangle of the cone of u.
    Cone(TriArgs),
    /// Rotate the cone triangle of u.
    Rotate {
        #[command(flatten)]
        args: TriArgs,
        /// Rotate to the left instead.
        #[arg(long)]
        left: bool,
    },
    /// Complete (𝕀, v) to a morphism from the cone triangle of u to that of v⋆u.
    Tr3(TriArgs),
    /// The octahedron over the cones of u, v and v⋆u.
    Octa(TriArgs),
    /// TR1 to TR4 on fuzzed instances (E2 and E3 unless an input is given).
    Axioms {
        input: Option<String>,
        #[command(flatten)]
        knobs: Knobs,
    },
}

/// Failure of a command: bad input (exit 2) or a failed check (exit 1).
enum Fail {
    Usage(String),
    Check(Vec<String>),
}

impl From<Error> for Fail {
    fn from(e: Error) -> Fail {
        match e {
            Error::Parse { .. } | Error::Field(_) => Fail::Usage(e.to_string()),
            _ => Fail::Check(vec![format!("status=fail error=\"{e}\"")]),
        }
    }
}

type Out = Result<Vec<String>, Fail>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.cmd) {
        Ok(lines) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::SUCCESS
        }
        Err(Fail::Check(lines)) => {
            for l in lines {
                println!("{l}");
            }
            ExitCode::from(1)
        }
        Err(Fail::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn env_field() -> Result<Option<Field>, Fail> {
    match std::env::var(FIELD_ENV) {
        Ok(s) if !s.trim().is_empty() => s.parse::<Field>().map(Some).map_err(|e| Fail::Usage(format!("{FIELD_ENV}: {e}"))),
        _ => Ok(None),
    }
}

fn load(input: &str) -> Result<Workspace, Fail> {
    let text = match input {
        "E1" => examples::E1_TWC.to_string(),
        "E2" => examples::E2_TWC.to_string(),
        "E3" => examples::E3_TWC.to_string(),
        path => std::fs::read_to_string(Path::new(path)).map_err(|e| Fail::Usage(format!("{path}: {e}")))?,
    };
    io::parse(&text).map_err(|e| match e {
        Error::Parse { .. } | Error::Field(_) => Fail::Usage(format!("{input}: {e}")),
        other => Fail::Check(vec![format!("input={input} status=fail error=\"{other}\"")]),
    })
}

fn object<'a>(ws: &'a Workspace, name: &str) -> Result<&'a Obj, Fail> {
    ws.object(name).ok_or_else(|| Fail::Usage(format!("unknown object '{name}'")))
}

fn morphism<'a>(ws: &'a Workspace, name: &str) -> Result<&'a TwMor, Fail> {
    ws.morphism(name).ok_or_else(|| Fail::Usage(format!("unknown morphism '{name}'")))
}

fn config(k: &Knobs) -> Result<Config, Fail> {
    if k.cases == 0 || k.dims == 0 || k.window < 0 {
        return Err(Fail::Usage("--cases and --dims must be positive, --window non-negative".into()));
    }
    let field = env_field()?.unwrap_or(Field::Q);
    Ok(Config { seed: k.seed, cases: k.cases, dims: k.dims, window: k.window, field })
}

fn finish(lines: Vec<String>, ok: bool) -> Out {
    let mut lines = lines;
    lines.push(format!("status={}", if ok { "pass" } else { "fail" }));
    if ok {
        Ok(lines)
    } else {
        Err(Fail::Check(lines))
    }
}

fn suites_out(header: String, suites: &[Suite]) -> Out {
    let (body, ok) = check::report(suites);
    let mut lines = vec![header];
    lines.extend(body);
    if ok {
        Ok(lines)
    } else {
        Err(Fail::Check(lines))
    }
}

fn mor_line(z: &SectionAlgebra, key: &str, f: &TwMor) -> String {
    format!("{key}={}", f.map.describe(z))
}

fn obj_lines(z: &SectionAlgebra, key: &str, o: &Obj) -> Vec<String> {
    vec![format!("{key}.module={}", o.module.describe(z)), format!("{key}.delta={}", o.delta.describe(z))]
}

fn canonical_lines(z: &SectionAlgebra, c: &Canonical) -> Vec<String> {
    let mut l = obj_lines(z, "E", &c.e);
    l.push(mor_line(z, "gamma", &c.gamma));
    l.push(mor_line(z, "f", &c.f));
    l.push(mor_line(z, "g", &c.g));
    l.push(mor_line(z, "class", &c.class(z)));
    l
}

fn triangle_lines(z: &SectionAlgebra, t: &Triangle) -> Vec<String> {
    let mut l = Vec::new();
    for (k, o) in [("X", &t.x), ("E", &t.e), ("Y", &t.y)] {
        l.extend(obj_lines(z, k, o));
    }
    l.push(mor_line(z, "u", &t.u));
    l.push(mor_line(z, "v", &t.v));
    l.push(mor_line(z, "w", &t.w));
    l.push(format!("certificate.gamma={}", t.cert.canonical.gamma.map.describe(z)));
    l
}

fn canonical_of(ws: &Workspace, e: &Ext) -> Result<Canonical, Fail> {
    let (x, y, g) = (object(ws, &e.x)?, object(ws, &e.y)?, morphism(ws, &e.gamma)?);
    if g.src != *y || g.tgt != *x {
        return Err(Fail::Usage(format!("corner '{}' must be a morphism {} -> {}", e.gamma, e.y, e.x)));
    }
    Ok(Canonical::new(&ws.algebra, x, y, &g.map)?)
}

fn verdict(lines: &mut Vec<String>, key: &str, r: twc_core::error::Result<()>) -> bool {
    match r {
        Ok(()) => {
            lines.push(format!("{key}=pass"));
            true
        }
        Err(e) => {
            lines.push(format!("{key}=fail reason=\"{e}\""));
            false
        }
    }
}

fn run(cmd: Cmd) -> Out {
    match cmd {
        Cmd::CheckAlgebra { input } => {
            let ws = load(&input)?;
            let z = &ws.algebra;
            let suite = Suite { name: "check-algebra", checks: check::algebra_checks("algebra", z) };
            let mut lines = vec![format!(
                "input={input} field={} idempotents={} basis={} max_arity={}",
                z.field(),
                z.idems().len(),
                z.basis().len(),
                z.max_arity()
            )];
            lines.extend(suite.lines());
            finish(lines, suite.passed())
        }
        Cmd::HatCheck { input, window } => {
            if window < 0 {
                return Err(Fail::Usage("--window must be non-negative".into()));
            }
            let ws = load(&input)?;
            let suite = Suite { name: "hat", checks: check::hat_checks(&[("algebra", ws.algebra)], window) };
            let mut lines = vec![format!("input={input} window={window}")];
            lines.extend(suite.lines());
            finish(lines, suite.passed())
        }
        Cmd::TwValidate { input } => {
            let ws = load(&input)?;
            let z = &ws.algebra;
            let mut lines = vec![format!("input={input} objects={} morphisms={}", ws.objects.len(), ws.morphisms.len())];
            let mut ok = true;
            for (n, o) in &ws.objects {
                let nil = o.nil_index();
                let res = tw::mc_residue(z, &o.delta, nil);
                ok &= res.is_zero();
                lines.push(format!(
                    "object={n} dim={} nil_index={nil} mc_residue={}",
                    o.module.total(),
                    if res.is_zero() { "0".to_string() } else { res.describe(z) }
                ));
            }
            for (n, f) in &ws.morphisms {
                let deg = f.degree(z).map_or("mixed".to_string(), |d| d.to_string());
                let cocycle = tw::is_cocycle(z, f);
                let mut l = format!("morphism={n} degree={deg} cocycle={cocycle}");
                if f.degree(z).is_some() {
                    match tw::coboundary_witness(z, f) {
                        Ok(Some(s)) => l.push_str(&format!(" coboundary=true witness={}", s.map.describe(z))),
                        Ok(None) => l.push_str(" coboundary=false"),
                        Err(e) => l.push_str(&format!(" coboundary=error reason=\"{e}\"")),
                    }
                }
                lines.push(l);
            }
            finish(lines, ok)
        }
        Cmd::Confl(c) => confl_cmd(c),
        Cmd::Tri(t) => tri_cmd(t),
        Cmd::Selftest(k) => {
            let cfg = config(&k)?;
            let header = format!(
                "command=selftest seed={} cases={} dims={} window={} field={}",
                cfg.seed, cfg.cases, cfg.dims, cfg.window, cfg.field
            );
            suites_out(header, &check::run_all(&cfg))
        }
        Cmd::Fuzz { knobs, suite } => {
            let cfg = config(&knobs)?;
            let names: Vec<&str> = match &suite {
                Some(s) if check::SUITES.contains(&s.as_str()) => vec![s.as_str()],
                Some(s) => return Err(Fail::Usage(format!("unknown suite '{s}' (one of {})", check::SUITES.join(", ")))),
                None => FUZZ_SUITES.to_vec(),
            };
            let header = format!(
                "command=fuzz seed={} cases={} dims={} field={} suites={}",
                cfg.seed,
                cfg.cases,
                cfg.dims,
                cfg.field,
                names.join(",")
            );
            let suites: Vec<Suite> = names.iter().map(|n| check::run_suite(n, &cfg).expect("known suite")).collect();
            suites_out(header, &suites)
        }
    }
}

/// Suites driven by the seeded generator.
const FUZZ_SUITES: [&str; 7] = ["tw", "sigma-tau", "j", "psi", "confl", "tri", "shift"];

fn confl_cmd(c: ConflCmd) -> Out {
    match c {
        ConflCmd::Make(e) => {
            let ws = load(&e.input)?;
            let cn = canonical_of(&ws, &e)?;
            finish(canonical_lines(&ws.algebra, &cn), true)
        }
        ConflCmd::Check { ext, other } => {
            let ws = load(&ext.input)?;
            let z = &ws.algebra;
            let cn = canonical_of(&ws, &ext)?;
            let mut lines = canonical_lines(z, &cn);
            let mut ok = verdict(&mut lines, "special", confl::validate_special(z, &cn.conflation()));
            lines.push(format!("nil_index_E={}", cn.e.nil_index()));
            if let Some(o) = other {
                let e2 = Ext { input: ext.input.clone(), x: ext.x.clone(), y: ext.y.clone(), gamma: o };
                let cn2 = canonical_of(&ws, &e2)?;
                match confl::equivalent(z, &cn, &cn2) {
                    Some(t) => {
                        lines.push("equivalent=true".into());
                        lines.push(mor_line(z, "ladder", &t));
                    }
                    None => lines.push("equivalent=false".into()),
                }
                let cob = tw::is_coboundary(z, &cn.class(z).sub(&cn2.class(z)));
                lines.push(format!("classes_cohomologous={cob}"));
                ok &= cob == confl::equivalent(z, &cn, &cn2).is_some();
            }
            finish(lines, ok)
        }
        ConflCmd::Push { ext, along } => {
            let ws = load(&ext.input)?;
            let z = &ws.algebra;
            let cn = canonical_of(&ws, &ext)?;
            let h = morphism(&ws, &along)?;
            if h.src != cn.x {
                return Err(Fail::Usage(format!("'{along}' must start at {}", ext.x)));
            }
            let (l, c2) = confl::pushout(z, &cn, h)?;
            let mut lines = canonical_lines(z, &c2);
            lines.push(mor_line(z, "ladder.middle", &l.t));
            let ok = verdict(&mut lines, "ladder", l.verify(z));
            finish(lines, ok)
        }
        ConflCmd::Pull { ext, along } => {
            let ws = load(&ext.input)?;
            let z = &ws.algebra;
            let cn = canonical_of(&ws, &ext)?;
            let h = morphism(&ws, &along)?;
            if h.tgt != cn.y {
                return Err(Fail::Usage(format!("'{along}' must end at {}", ext.y)));
            }
            let (l, c2) = confl::pullback(z, &cn, h)?;
            let mut lines = canonical_lines(z, &c2);
            lines.push(mor_line(z, "ladder.middle", &l.t));
            let ok = verdict(&mut lines, "ladder", l.verify(z));
            finish(lines, ok)
        }
        ConflCmd::Psi { input, x, class } => {
            let ws = load(&input)?;
            let z = &ws.algebra;
            let xo = object(&ws, &x)?;
            let h = morphism(&ws, &class)?;
            if h.tgt != xo.shift(1) {
                return Err(Fail::Usage(format!("class '{class}' must end at {x}[1]")));
            }
            let cn = confl::psi(z, xo, h)?;
            let mut lines = canonical_lines(z, &cn);
            let back = confl::psi_inv(z, &cn);
            let ok = back.map == h.map;
            lines.push(format!("round_trip={}", if ok { "pass" } else { "fail" }));
            finish(lines, ok)
        }
        ConflCmd::Cone { input, mor } => {
            let ws = load(&input)?;
            let z = &ws.algebra;
            let f = morphism(&ws, &mor)?;
            let cone = confl::cone_conflation(z, f)?;
            let mut lines = obj_lines(z, "W", &cone.w);
            lines.extend(obj_lines(z, "middle", &cone.eta.e));
            lines.push(mor_line(z, "inflation", &cone.eta.f));
            lines.push(mor_line(z, "deflation", &cone.eta.g));
            let ok = verdict(&mut lines, "certificate", cone.cert.verify(z, &cone.eta));
            finish(lines, ok)
        }
        ConflCmd::Rotate(e) => {
            let ws = load(&e.input)?;
            let z = &ws.algebra;
            let cn = canonical_of(&ws, &e)?;
            let r = confl::rotation_conflation(z, &cn, &cn.x.shift(1))?;
            let mut lines = obj_lines(z, "middle", &r.eta.e);
            lines.push(mor_line(z, "inflation", &r.eta.f));
            lines.push(mor_line(z, "deflation", &r.eta.g));
            let ok = verdict(&mut lines, "certificate", r.cert.verify(z, &r.eta));
            finish(lines, ok)
        }
    }
}

/// The composable pair named on the command line, or a seeded one.
fn pair(a: &TriArgs) -> Result<(Workspace, tri::Instance, String), Fail> {
    let ws = load(&a.input)?;
    let cfg = config(&a.knobs)?;
    let fuzzed = || tri::fuzz_instances(&ws.algebra, cfg.seed, 1, cfg.dims.min(3)).remove(0);
    let (inst, origin) = match (&a.u, &a.v) {
        (Some(u), Some(v)) => {
            let (u, v) = (morphism(&ws, u)?.clone(), morphism(&ws, v)?.clone());
            if u.tgt != v.src {
                return Err(Fail::Usage("u and v are not composable".into()));
            }
            (tri::Instance { u, v }, "file".to_string())
        }
        (Some(u), None) => {
            let u = morphism(&ws, u)?.clone();
            let v = TwMor::identity(&ws.algebra, &u.tgt);
            (tri::Instance { u, v }, "file".to_string())
        }
        (None, None) => (fuzzed(), format!("seed:{}", cfg.seed)),
        (None, Some(_)) => return Err(Fail::Usage("--v requires --u".into())),
    };
    for m in [&inst.u, &inst.v] {
        if !tw::is_cocycle(&ws.algebra, m) {
            return Err(Fail::Check(vec!["status=fail error=\"input morphism is not a cocycle\"".into()]));
        }
    }
    Ok((ws, inst, origin))
}

fn tri_cmd(t: TriCmd) -> Out {
    match t {
        TriCmd::Cone(a) => {
            let (ws, inst, origin) = pair(&a)?;
            let z = &ws.algebra;
            let tr = tri::cone_of(z, &inst.u)?;
            let mut lines = vec![format!("instance={origin}")];
            lines.extend(triangle_lines(z, &tr));
            let ok = verdict(&mut lines, "triangle", tr.verify(z));
            finish(lines, ok)
        }
        TriCmd::Rotate { args, left } => {
            let (ws, inst, origin) = pair(&args)?;
            let z = &ws.algebra;
            let tr = tri::cone_of(z, &inst.u)?;
            let r = if left { tri::rotate_left(z, &tr)? } else { tri::rotate_right(z, &tr)? };
            let mut lines = vec![format!("instance={origin} direction={}", if left { "left" } else { "right" })];
            lines.extend(triangle_lines(z, &r));
            let ok = verdict(&mut lines, "triangle", r.verify(z));
            finish(lines, ok)
        }
        TriCmd::Tr3(a) => {
            let (ws, inst, origin) = pair(&a)?;
            let z = &ws.algebra;
            let t1 = tri::cone_of(z, &inst.u)?;
            let t2 = tri::cone_of(z, &tw::star(z, &inst.v, &inst.u))?;
            let ix = TwMor::identity(z, &t1.x);
            let th3 = tri::complete_tr3(z, &t1, &t2, &ix, &inst.v)?;
            let mut lines = vec![format!("instance={origin}")];
            lines.push(mor_line(z, "theta1", &ix));
            lines.push(mor_line(z, "theta2", &inst.v));
            lines.push(mor_line(z, "theta3", &th3));
            let ok = verdict(&mut lines, "morphism_of_triangles", tri::verify_morphism(z, &t1, &t2, [&ix, &inst.v, &th3]));
            finish(lines, ok)
        }
        TriCmd::Octa(a) => {
            let (ws, inst, origin) = pair(&a)?;
            let z = &ws.algebra;
            let t1 = tri::cone_of(z, &inst.u)?;
            let t2 = tri::cone_of(z, &inst.v)?;
            let t3 = tri::cone_of(z, &tw::star(z, &inst.v, &inst.u))?;
            let o = tri::octahedron(z, &t1, &t2, &t3)?;
            let mut lines = vec![format!("instance={origin}")];
            lines.extend(triangle_lines(z, &o.tri));
            let ok = verdict(&mut lines, "octahedron", tri::verify_octahedron(z, &t1, &t2, &t3, &o));
            finish(lines, ok)
        }
        TriCmd::Axioms { input, knobs } => {
            let cfg = config(&knobs)?;
            let inputs: Vec<String> = match input {
                Some(i) => vec![i],
                None => vec!["E2".into(), "E3".into()],
            };
            let n = check::tri_instances(&cfg).min(cfg.cases.max(1));
            let mut lines = Vec::new();
            let mut ok = true;
            for (k, i) in inputs.iter().enumerate() {
                let ws = load(i)?;
                let seed = cfg.seed.wrapping_add(k as u64);
                let inst = tri::fuzz_instances(&ws.algebra, seed, n, cfg.dims.min(3));
                let rep = tri::verify_axioms(&ws.algebra, &inst, seed, Mutation::None);
                lines.push(format!("input={i} seed={seed} instances={n}"));
                lines.extend(rep.lines());
                ok &= rep.passed();
            }
            finish(lines, ok)
        }
    }
}
