//! Subcommands. Each one maps a parsed document to a JSON report and a
//! verdict; structural problems are returned as [`InputError`].

use clap::Subcommand;
use foliated_tori::exact_linalg::{canonical_alternating, frobenius_normal_form, smith_normal_form};
use foliated_tori::grassmannian::{
    chart_parameter_count, check_isotropy, check_transversality, is_isotropic, moduli_dimension,
    period_from_plane, plane_from_period, plane_positivity, sample_chart, tangent_dimension,
    AmbientForm,
};
use foliated_tori::moduli::{
    orbit_distance_sample, positivity_transport_check, transport_with_form, verify_polarized_witness,
    FormConvention, OrbitOptions,
};
use foliated_tori::numeric::{to_complex, CMat};
use foliated_tori::polarization::{hermitian_form, validate_polarization, Polarization};
use foliated_tori::torus::{adapt, verify_cr_witness, AdaptedPeriodMatrix, EquivalenceWitness, TorusMorphism, TorusShape};
use foliated_tori::Tolerances;
use num_bigint::BigInt;
use serde_json::{json, Value};

use crate::document::{complex_rows, int_rows, ints, real_rows, Document, InputError, PeriodDoc, WitnessDoc};

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Smith normal form `U·A·V = S` of `matrix`.
    Snf,
    /// Symplectic basis for the alternating `matrix` (or `polarization`).
    Frobenius,
    /// Reduce `period` to adapted form; emits the witness as a document.
    Adapt,
    /// Check `polarization` against `period`.
    ValidatePolarization,
    /// Re-emit the document in normalized form.
    Canonicalize,
    /// Period matrix to isotropic plane.
    Embed,
    /// Isotropic plane to adapted period matrix.
    Extract,
    /// Transversality, isotropy and positivity of `plane`.
    CheckPlane {
        /// Also require positivity.
        #[arg(long)]
        strict: bool,
    },
    /// Tangent dimension of the isotropic locus at `plane`.
    DimCheck,
    /// Check `witness` for `period ≈ target`.
    VerifyEquiv {
        /// Require `M ∈ F` and `P ∈ H` instead of `L_{n,k}` and `GL(2n+k, ℤ)`.
        #[arg(long)]
        polarized: bool,
    },
    /// Lattice symmetries with entries in `[−bound, bound]` nearly fixing `plane`.
    OrbitSample {
        #[arg(long)]
        bound: u32,
        #[arg(long)]
        radius: f64,
        /// Only enumerate `β = 0`.
        #[arg(long)]
        beta_zero: bool,
    },
    /// Transport the metric of `plane` along `alpha`.
    TransportCheck,
    /// Random valid instance from a chart sample.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        k: usize,
        /// Comma-separated divisors (default all ones).
        #[arg(long, value_delimiter = ',')]
        divisors: Vec<u64>,
    },
}

impl Command {
    pub fn reads_input(&self) -> bool {
        !matches!(self, Command::Gen { .. })
    }
}

/// Report plus verdict: `valid` selects exit code 0 or 1.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub output: String,
    pub valid: bool,
}

impl Outcome {
    fn report(value: Value, valid: bool) -> Self {
        let mut output = serde_json::to_string_pretty(&value).expect("reports serialize");
        output.push('\n');
        Self { output, valid }
    }

    fn document(doc: &Document) -> Self {
        Self {
            output: doc.emit(),
            valid: true,
        }
    }

    fn failure(command: &str, error: impl ToString) -> Self {
        Self::report(json!({ "command": command, "valid": false, "error": error.to_string() }), false)
    }
}

pub fn run(command: &Command, doc: Option<&Document>, tol: &Tolerances) -> Result<Outcome, InputError> {
    if let Command::Gen { seed, n, k, divisors } = command {
        return generate(*seed, *n, *k, divisors, tol);
    }
    let doc = doc.ok_or_else(|| InputError::new("", "no input document"))?;
    doc.check()?;
    match command {
        Command::Snf => snf(doc),
        Command::Frobenius => frobenius(doc),
        Command::Adapt => adapt_cmd(doc, tol),
        Command::ValidatePolarization => validate(doc, tol),
        Command::Canonicalize => Ok(Outcome::document(doc)),
        Command::Embed => embed(doc, tol),
        Command::Extract => extract(doc, tol),
        Command::CheckPlane { strict } => check_plane(doc, *strict, tol),
        Command::DimCheck => dim_check(doc, tol),
        Command::VerifyEquiv { polarized } => verify_equiv(doc, *polarized, tol),
        Command::OrbitSample { bound, radius, beta_zero } => orbit(doc, *bound, *radius, *beta_zero, tol),
        Command::TransportCheck => transport(doc, tol),
        Command::Gen { .. } => unreachable!(),
    }
}

fn snf(doc: &Document) -> Result<Outcome, InputError> {
    let a = doc.int_matrix("matrix")?;
    let s = smith_normal_form(&a);
    Ok(Outcome::report(
        json!({
            "command": "snf",
            "u": int_rows(&s.u),
            "s": int_rows(&s.s),
            "v": int_rows(&s.v),
            "diagonal": ints(&s.diagonal()),
            "rank": s.rank(),
        }),
        true,
    ))
}

fn frobenius(doc: &Document) -> Result<Outcome, InputError> {
    let field = if doc.matrix.is_some() { "matrix" } else { "polarization" };
    let e = doc.int_matrix(field)?;
    match frobenius_normal_form(&e) {
        Ok(f) => Ok(Outcome::report(
            json!({
                "command": "frobenius",
                "basis_change": int_rows(&f.basis_change),
                "divisors": ints(&f.divisors),
                "kernel_dim": f.kernel_dim,
                "canonical": int_rows(&f.canonical_matrix()),
                "verified": f.verify(&e),
            }),
            true,
        )),
        Err(err) => Ok(Outcome::failure("frobenius", err)),
    }
}

fn witness_doc(m: &TorusMorphism, p: &foliated_tori::exact_linalg::IntMatrix) -> WitnessDoc {
    WitnessDoc {
        a: complex_rows(&m.a),
        b: complex_rows(&m.b),
        c: real_rows(&m.c),
        p: int_rows(p),
    }
}

fn adapt_cmd(doc: &Document, tol: &Tolerances) -> Result<Outcome, InputError> {
    let omega = doc.period_matrix("period")?;
    match adapt(&omega, tol) {
        Ok(a) => {
            let mut out = Document::new(Some(omega.shape()));
            out.period = Some(PeriodDoc::from(&omega));
            out.target = Some(PeriodDoc::from(&*a.adapted));
            out.witness = Some(witness_doc(&a.morphism, &a.permutation));
            Ok(Outcome::document(&out))
        }
        Err(err) => Ok(Outcome::failure("adapt", err)),
    }
}

fn validate(doc: &Document, tol: &Tolerances) -> Result<Outcome, InputError> {
    let omega = doc.period_matrix("period")?;
    let e = doc.int_matrix("polarization")?;
    let Ok(e) = Polarization::new(e) else {
        return Ok(Outcome::report(
            json!({ "command": "validate-polarization", "valid": false, "integral_alternating": false }),
            false,
        ));
    };
    let report = match validate_polarization(&e, &omega, tol) {
        Ok(r) => r,
        Err(err) => return Ok(Outcome::failure("validate-polarization", err)),
    };
    let hermitian = hermitian_form(&e, &omega, tol).ok().map(|h| h.eigenvalues());
    let valid = report.is_valid();
    Ok(Outcome::report(
        json!({
            "command": "validate-polarization",
            "valid": valid,
            "integral_alternating": report.integral_alternating,
            "compatible": report.compatible,
            "compatibility_residual": report.compatibility_residual,
            "positive": report.positive,
            "g_eigenvalues": report.g_eigenvalues,
            "hermitian_eigenvalues": hermitian,
        }),
        valid,
    ))
}

fn embed(doc: &Document, tol: &Tolerances) -> Result<Outcome, InputError> {
    let omega = doc.period_matrix("period")?;
    match plane_from_period(&omega, tol) {
        Ok(l) => {
            let mut out = Document::new(Some(omega.shape()));
            out.period = Some(PeriodDoc::from(&omega));
            out.plane = Some(complex_rows(l.basis()));
            Ok(Outcome::document(&out))
        }
        Err(err) => Ok(Outcome::failure("embed", err)),
    }
}

fn extract(doc: &Document, tol: &Tolerances) -> Result<Outcome, InputError> {
    let l = match doc.plane(tol)? {
        Ok(l) => l,
        Err(err) => return Ok(Outcome::failure("extract", err)),
    };
    match period_from_plane(&l, tol) {
        Ok(omega) => {
            let mut out = Document::new(Some(l.shape()));
            out.period = Some(PeriodDoc::from(&*omega));
            out.plane = doc.plane.clone();
            Ok(Outcome::document(&out))
        }
        Err(err) => Ok(Outcome::failure("extract", err)),
    }
}

fn ambient(doc: &Document, shape: TorusShape) -> Result<AmbientForm, InputError> {
    match doc.divisors(shape)? {
        Some(d) => AmbientForm::canonical(shape, &d).map_err(|e| InputError::new("divisors", e.to_string())),
        None => Ok(AmbientForm::principal(shape)),
    }
}

fn convention(doc: &Document, shape: TorusShape) -> Result<FormConvention, InputError> {
    Ok(match doc.divisors(shape)? {
        Some(d) => FormConvention::Twisted(d),
        None => FormConvention::Standard,
    })
}

fn check_plane(doc: &Document, strict: bool, tol: &Tolerances) -> Result<Outcome, InputError> {
    let shape = doc.shape()?;
    let form = ambient(doc, shape)?;
    let l = match doc.plane(tol)? {
        Ok(l) => l,
        Err(err) => return Ok(Outcome::failure("check-plane", err)),
    };
    let transversal = check_transversality(&l, tol);
    let isotropic = is_isotropic(&l, &form, tol);
    let positive = plane_positivity(&l, &form, tol);
    let valid = transversal && isotropic && (!strict || positive);
    Ok(Outcome::report(
        json!({
            "command": "check-plane",
            "valid": valid,
            "transversal": transversal,
            "isotropy_residual": check_isotropy(&l, &form),
            "isotropic": isotropic,
            "positive": positive,
            "strict": strict,
        }),
        valid,
    ))
}

fn dim_check(doc: &Document, tol: &Tolerances) -> Result<Outcome, InputError> {
    let shape = doc.shape()?;
    let form = ambient(doc, shape)?;
    let l = match doc.plane(tol)? {
        Ok(l) => l,
        Err(err) => return Ok(Outcome::failure("dim-check", err)),
    };
    match tangent_dimension(&l, &form, tol) {
        Ok(dim) => {
            let expected = moduli_dimension(shape);
            Ok(Outcome::report(
                json!({
                    "command": "dim-check",
                    "valid": dim == expected,
                    "tangent_dimension": dim,
                    "expected": expected,
                    "chart_parameters": chart_parameter_count(shape),
                }),
                dim == expected,
            ))
        }
        Err(err) => Ok(Outcome::failure("dim-check", err)),
    }
}

fn verify_equiv(doc: &Document, polarized: bool, tol: &Tolerances) -> Result<Outcome, InputError> {
    let shape = doc.shape()?;
    let omega = doc.period_matrix("period")?;
    let omega2 = doc.period_matrix("target")?;
    let (a, b, c, p) = doc.witness_parts(shape)?;
    let report = if polarized {
        let (Ok(o1), Ok(o2)) = (AdaptedPeriodMatrix::new(omega), AdaptedPeriodMatrix::new(omega2)) else {
            return Ok(Outcome::failure("verify-equiv", "polarized witnesses need adapted period matrices"));
        };
        let (n, k) = (shape.n(), shape.k());
        let mut m = CMat::zeros(n + k, n + k);
        m.view_mut((0, 0), (n, n)).copy_from(&a);
        m.view_mut((0, n), (n, k)).copy_from(&b);
        m.view_mut((n, n), (k, k)).copy_from(&to_complex(&c));
        verify_polarized_witness(&m, &p.to_f64(), &o1, &o2, &convention(doc, shape)?, tol)
    } else {
        let m = match TorusMorphism::linear(a, b, c) {
            Ok(m) => m,
            Err(err) => return Ok(Outcome::failure("verify-equiv", err)),
        };
        verify_cr_witness(&EquivalenceWitness { m, p }, &omega, &omega2, tol)
    };
    Ok(Outcome::report(
        json!({
            "command": "verify-equiv",
            "polarized": polarized,
            "valid": report.accepted,
            "residual": report.residual,
            "scale": report.scale,
            "reasons": report.reasons,
        }),
        report.accepted,
    ))
}

fn orbit(doc: &Document, bound: u32, radius: f64, beta_zero: bool, tol: &Tolerances) -> Result<Outcome, InputError> {
    let shape = doc.shape()?;
    let conv = convention(doc, shape)?;
    let l = match doc.plane(tol)? {
        Ok(l) => l,
        Err(err) => return Ok(Outcome::failure("orbit-sample", err)),
    };
    match orbit_distance_sample(&l, &conv, bound, radius, OrbitOptions { beta_zero }, tol) {
        Ok(hits) => {
            let list: Vec<Value> = hits
                .iter()
                .map(|h| json!({ "p": int_rows(h.symmetry.matrix()), "distance": h.distance }))
                .collect();
            Ok(Outcome::report(
                json!({
                    "command": "orbit-sample",
                    "valid": true,
                    "bound": bound,
                    "radius": radius,
                    "beta_zero": beta_zero,
                    "count": list.len(),
                    "hits": list,
                }),
                true,
            ))
        }
        Err(err) => Ok(Outcome::failure("orbit-sample", err)),
    }
}

fn transport(doc: &Document, tol: &Tolerances) -> Result<Outcome, InputError> {
    let shape = doc.shape()?;
    let alpha = doc.int_matrix("alpha")?;
    let l = match doc.plane(tol)? {
        Ok(l) => l,
        Err(err) => return Ok(Outcome::failure("transport-check", err)),
    };
    let result = if doc.polarization.is_some() {
        match Polarization::new(doc.int_matrix("polarization")?) {
            Ok(e) => positivity_transport_check(&alpha, &l, &e, tol),
            Err(err) => return Ok(Outcome::failure("transport-check", err)),
        }
    } else {
        transport_with_form(&alpha, &l, &ambient(doc, shape)?, tol)
    };
    match result {
        Ok(r) => {
            let valid = r.accepted();
            Ok(Outcome::report(
                json!({
                    "command": "transport-check",
                    "valid": valid,
                    "invariance_residual": r.invariance_residual,
                    "d": r.d,
                    "d_prime": r.d_prime,
                    "derived_residual": r.derived_residual,
                    "literal_residual": r.literal_residual,
                    "literal_matches": r.literal_matches,
                    "s_norm": r.s_norm,
                    "s_bound": r.s_bound,
                    "spectra_agree": r.spectra_agree,
                    "fixes_plane": r.fixes_plane(),
                    "pipeline_residual": r.pipeline_residual,
                }),
                valid,
            ))
        }
        Err(err) => Ok(Outcome::failure("transport-check", err)),
    }
}

fn generate(seed: u64, n: usize, k: usize, divisors: &[u64], tol: &Tolerances) -> Result<Outcome, InputError> {
    let shape = TorusShape::new(n, k).map_err(|e| InputError::new("--n", e.to_string()))?;
    let d: Vec<BigInt> = if divisors.is_empty() {
        vec![BigInt::from(1); n]
    } else {
        divisors.iter().map(|&v| BigInt::from(v)).collect()
    };
    let l = sample_chart(shape, &d, seed, tol).map_err(|e| InputError::new("--divisors", e.to_string()))?;
    let omega = period_from_plane(&l, tol).map_err(|e| InputError::new("--seed", e.to_string()))?;
    let mut out = Document::new(Some(shape));
    out.period = Some(PeriodDoc::from(&*omega));
    out.polarization = Some(int_rows(&canonical_alternating(&d, k)));
    out.divisors = Some(ints(&d));
    out.plane = Some(complex_rows(l.basis()));
    out.seed = Some(seed);
    Ok(Outcome::document(&out))
}
