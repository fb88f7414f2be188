//! Chains of reductions with their composed advantage budget.

use num_bigint::BigUint;
use rand::Rng;

use super::binary::{binlwe_from_extlwe, binlwe_from_lwe, binlwe_zero_hint, lhl_delta, pad_dimension};
use super::extlwe::{extlwe_min_width, extlwe_reduce};
use super::first_errorless::{first_errorless_reduce, prime_loss};
use super::gadget::{gadget_basis, GadgetPair};
use super::multi_secret::multi_secret_reduce;
use super::normal_form::{normal_form_budget, normal_form_min_s, normal_form_reduce};
use super::switch::{mod_dim_switch, switch_min_r};
use super::{check_eps, q_f64, AdvantageMap, ReductionReport};
use crate::error::{Error, Result};
use crate::lwe::{ExtLweChallenge, NoiseSpec, SampleBatch};
use crate::seed::SeedStream;
use crate::Outcome;

/// Data flowing between stages.
#[derive(Clone, Debug)]
pub enum Instance {
    Lwe(SampleBatch),
    ExtLwe { challenge: ExtLweChallenge, chi: NoiseSpec },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Kind {
    Lwe,
    FirstErrorless,
    /// Extended LWE with `t` secrets.
    ExtLwe {
        t: usize,
    },
}

/// Interface of a stage boundary: problem kind, dimension, number of samples
/// (the `m` of extended LWE), modulus, and claimed noise width.
#[derive(Clone, Debug, PartialEq)]
pub struct Shape {
    pub kind: Kind,
    pub n: usize,
    pub m: usize,
    pub q: BigUint,
    pub noise: f64,
}

impl Shape {
    pub fn lwe(n: usize, m: usize, q: impl Into<BigUint>, noise: f64) -> Shape {
        Shape {
            kind: Kind::Lwe,
            n,
            m,
            q: q.into(),
            noise,
        }
    }

    pub fn of(instance: &Instance) -> Shape {
        match instance {
            Instance::Lwe(b) => Shape {
                kind: if b.first_errorless {
                    Kind::FirstErrorless
                } else {
                    Kind::Lwe
                },
                n: b.params.n,
                m: b.len(),
                q: b.params.q.clone(),
                noise: b.params.noise.alpha(),
            },
            Instance::ExtLwe { challenge, chi } => Shape {
                kind: Kind::ExtLwe { t: challenge.t() },
                n: challenge.n,
                m: challenge.m,
                q: challenge.q.clone(),
                noise: chi.alpha(),
            },
        }
    }

    fn describe(&self) -> String {
        let kind = match self.kind {
            Kind::Lwe => "lwe".to_string(),
            Kind::FirstErrorless => "first-errorless".to_string(),
            Kind::ExtLwe { t } => format!("extlwe^{t}"),
        };
        format!("{kind} n={} m={} q={} noise={}", self.n, self.m, self.q, self.noise)
    }
}

/// Where the extended-LWE stage gets its hint vector.
#[derive(Clone, Debug, PartialEq)]
pub enum HintSource {
    /// Uniform in `{0,1}^m`, drawn from the stage's random stream.
    Random,
    Zero,
    Fixed(Vec<i64>),
}

/// One reduction with its parameters. Widths left as `None` take the least
/// value the corresponding guarantee admits.
#[derive(Clone, Debug, PartialEq)]
pub enum Stage {
    NormalForm {
        s: Option<f64>,
    },
    FirstErrorless {
        m: Option<usize>,
    },
    ExtLwe {
        z: HintSource,
        r: Option<f64>,
    },
    MultiSecret {
        t: usize,
    },
    BinaryFromHints {
        gamma: Option<f64>,
    },
    BinaryFromLwe {
        n: usize,
        beta: f64,
    },
    BinaryZeroHint,
    PadDimension {
        alpha: f64,
    },
    /// Gadget `k` (1 means plain modulus switching to `q_to`; otherwise
    /// `q_to` must equal `q^k`). `q_from`, when set, must match the input.
    ModSwitch {
        q_from: Option<BigUint>,
        q_to: BigUint,
        k: usize,
        r: Option<f64>,
        b_bound: f64,
        delta: f64,
    },
}

impl Stage {
    pub fn name(&self) -> &'static str {
        match self {
            Stage::NormalForm { .. } => "normal-form",
            Stage::FirstErrorless { .. } => "first-errorless",
            Stage::ExtLwe { .. } => "extlwe",
            Stage::MultiSecret { .. } => "multi-secret",
            Stage::BinaryFromHints { .. } => "binary-from-hints",
            Stage::BinaryFromLwe { .. } => "binary-from-lwe",
            Stage::BinaryZeroHint => "binary-zero-hint",
            Stage::PadDimension { .. } => "pad-dimension",
            Stage::ModSwitch { .. } => "mod-switch",
        }
    }
}

fn gadget_for(n: usize, q_in: &BigUint, q_to: &BigUint, k: usize) -> Result<GadgetPair> {
    if k == 1 {
        super::gadget::modulus_reduction_pair(n, q_to)
    } else {
        let gp = gadget_basis(n, k, q_in)?;
        if &gp.q_prime != q_to {
            return Err(Error::param(
                "q_to",
                format!("gadget with k = {k} switches to q^k = {}", gp.q_prime),
            ));
        }
        Ok(gp)
    }
}

/// A validated chain of stages.
#[derive(Clone, Debug)]
pub struct Pipeline {
    pub stages: Vec<Stage>,
    pub eps: f64,
    /// `shapes[0]` is the input, `shapes[i + 1]` the output of stage `i`.
    pub shapes: Vec<Shape>,
    /// Static report of every stage.
    pub reports: Vec<ReductionReport>,
}

/// Result of one run of a pipeline.
#[derive(Clone, Debug)]
pub struct PipelineRun {
    pub output: Instance,
    /// Reports produced while running (they carry measured extras).
    pub reports: Vec<ReductionReport>,
}

fn chain(stage: usize, message: impl Into<String>) -> Error {
    Error::Chain {
        stage,
        message: message.into(),
    }
}

fn stage_shape(i: usize, stage: &Stage, s: &Shape, eps: f64) -> Result<(Shape, AdvantageMap, f64)> {
    let need = |ok: bool, what: &str| {
        if ok {
            Ok(())
        } else {
            Err(chain(
                i,
                format!("{} needs {what} input, got {}", stage.name(), s.describe()),
            ))
        }
    };
    Ok(match stage {
        Stage::NormalForm { s: sp } => {
            need(s.kind == Kind::Lwe, "LWE")?;
            if s.q < BigUint::from(25u8) {
                return Err(chain(i, format!("normal form needs q >= 25, got {}", s.q)));
            }
            let budget = normal_form_budget(s.n, &s.q);
            if s.m <= budget {
                return Err(chain(
                    i,
                    format!("normal form needs more than {budget} samples, got {}", s.m),
                ));
            }
            let sp = sp.unwrap_or_else(|| normal_form_min_s(s.n, &s.q, eps));
            let out = Shape {
                m: s.m - budget,
                ..s.clone()
            };
            (
                out,
                AdvantageMap {
                    scale: 0.25,
                    loss: 2.0 * eps,
                },
                sp,
            )
        }
        Stage::FirstErrorless { m } => {
            need(s.kind == Kind::Lwe, "LWE")?;
            let m = m.unwrap_or(s.m);
            if m == 0 || m > s.m + 1 {
                return Err(chain(
                    i,
                    format!("first-errorless can emit 1..={} samples, asked for {m}", s.m + 1),
                ));
            }
            let out = Shape {
                kind: Kind::FirstErrorless,
                n: s.n + 1,
                m,
                ..s.clone()
            };
            (
                out,
                AdvantageMap {
                    scale: 1.0,
                    loss: prime_loss(s.n + 1, &s.q),
                },
                0.0,
            )
        }
        Stage::ExtLwe { z, r } => {
            need(s.kind == Kind::FirstErrorless, "first-is-errorless")?;
            if let HintSource::Fixed(z) = z {
                if z.len() != s.m {
                    return Err(chain(i, format!("hint vector has length {}, need {}", z.len(), s.m)));
                }
            }
            let r = r.unwrap_or_else(|| extlwe_min_width(s.m, &s.q, eps));
            let out = Shape {
                kind: Kind::ExtLwe { t: 1 },
                noise: (4.0 * s.noise * s.noise + r * r).sqrt(),
                ..s.clone()
            };
            (
                out,
                AdvantageMap {
                    scale: 1.0,
                    loss: 16.5 * eps,
                },
                r,
            )
        }
        Stage::MultiSecret { t } => {
            need(s.kind == Kind::ExtLwe { t: 1 }, "one-secret extended-LWE")?;
            if *t == 0 {
                return Err(chain(i, "multi-secret needs t >= 1"));
            }
            let out = Shape {
                kind: Kind::ExtLwe { t: *t },
                ..s.clone()
            };
            (
                out,
                AdvantageMap {
                    scale: 1.0 / *t as f64,
                    loss: 0.0,
                },
                0.0,
            )
        }
        Stage::BinaryFromHints { .. } | Stage::BinaryZeroHint => {
            let t = match s.kind {
                Kind::ExtLwe { t } => t,
                _ => {
                    return Err(chain(
                        i,
                        format!("{} needs extended-LWE input, got {}", stage.name(), s.describe()),
                    ))
                }
            };
            let beta = s.noise;
            let gamma = match stage {
                Stage::BinaryFromHints { gamma } => gamma.unwrap_or((s.m as f64).sqrt() * beta),
                _ => 0.0,
            };
            let alpha = (2.0 * s.m as f64).sqrt() * beta;
            let delta = lhl_delta(s.n, s.m, &s.q);
            let out = Shape {
                kind: Kind::Lwe,
                n: s.m,
                m: t,
                q: s.q.clone(),
                noise: alpha.max(gamma),
            };
            let adv = AdvantageMap {
                scale: 1.0 / 3.0,
                loss: (delta + 4.0 * t as f64 * eps) / 3.0,
            };
            (out, adv, gamma)
        }
        Stage::BinaryFromLwe { n, beta } => {
            need(s.kind == Kind::Lwe, "LWE")?;
            let delta = lhl_delta(s.n, *n, &s.q);
            let out = Shape {
                kind: Kind::Lwe,
                n: *n,
                m: s.m,
                q: s.q.clone(),
                noise: (2.0 * *n as f64).sqrt() * beta,
            };
            let adv = AdvantageMap {
                scale: 1.0 / 3.0,
                loss: (delta + 4.0 * s.m as f64 * eps) / 3.0,
            };
            (out, adv, *beta)
        }
        Stage::PadDimension { alpha } => {
            need(s.kind == Kind::Lwe, "LWE")?;
            if *alpha < s.noise {
                return Err(chain(i, format!("cannot narrow noise from {} to {alpha}", s.noise)));
            }
            let out = Shape {
                n: s.n + 1,
                noise: *alpha,
                ..s.clone()
            };
            (out, AdvantageMap::IDENTITY, 0.0)
        }
        Stage::ModSwitch {
            q_from,
            q_to,
            k,
            r,
            b_bound,
            delta,
        } => {
            need(s.kind == Kind::Lwe, "LWE")?;
            if let Some(qf) = q_from {
                if qf != &s.q {
                    return Err(chain(
                        i,
                        format!("mod-switch expects q = {qf}, previous stage outputs q = {}", s.q),
                    ));
                }
            }
            let gp = gadget_for(s.n, &s.q, q_to, *k).map_err(|e| chain(i, e.to_string()))?;
            let r = r.unwrap_or_else(|| switch_min_r(&gp, q_f64(&s.q), eps));
            let out = Shape {
                kind: Kind::Lwe,
                n: gp.n_prime(),
                m: s.m,
                q: q_to.clone(),
                noise: (s.noise * s.noise + 2.0 * r * r * b_bound * b_bound).sqrt(),
            };
            (
                out,
                AdvantageMap {
                    scale: 1.0,
                    loss: delta + 14.0 * eps * s.m as f64,
                },
                r,
            )
        }
    })
}

/// Validates that each stage accepts the previous output and computes the
/// composed budget. An empty list is the identity.
pub fn compose_pipeline(stages: Vec<Stage>, input: Shape, eps: f64) -> Result<(Pipeline, ReductionReport)> {
    check_eps(eps)?;
    let mut shapes = vec![input.clone()];
    let mut reports = Vec::with_capacity(stages.len());
    let mut total = AdvantageMap::IDENTITY;
    for (i, st) in stages.iter().enumerate() {
        let cur = shapes.last().expect("nonempty");
        let (out, adv, _) = stage_shape(i, st, cur, eps)?;
        total = total.then(&adv);
        reports.push(ReductionReport {
            stage: st.name().to_string(),
            step: step_name(st),
            input: cur.describe(),
            output: out.describe(),
            noise: out.noise,
            extra: vec![],
            eps,
            advantage: adv,
        });
        shapes.push(out);
    }
    let last = shapes.last().expect("nonempty");
    let report = ReductionReport {
        stage: "pipeline".to_string(),
        step: "composition of the stages",
        input: input.describe(),
        output: last.describe(),
        noise: last.noise,
        extra: vec![("stages".to_string(), stages.len() as f64)],
        eps,
        advantage: total,
    };
    Ok((
        Pipeline {
            stages,
            eps,
            shapes,
            reports,
        },
        report,
    ))
}

fn step_name(st: &Stage) -> &'static str {
    match st {
        Stage::NormalForm { .. } => "normal form (secret drawn from the noise distribution)",
        Stage::FirstErrorless { .. } => "first sample errorless",
        Stage::ExtLwe { .. } => "extended LWE with hints from a set of quality xi",
        Stage::MultiSecret { .. } => "one secret to many by a hybrid over the secrets",
        Stage::BinaryFromHints { .. } | Stage::BinaryFromLwe { .. } | Stage::BinaryZeroHint => {
            "binary secret (three-way hybrid argument)"
        }
        Stage::PadDimension { .. } => "one extra secret coordinate and wider noise",
        Stage::ModSwitch { .. } => "modulus-dimension switching",
    }
}

/// The guarantee for the binary-secret chain as a single map:
/// `zeta -> (zeta - delta)/(3m) - 41 eps / 2 - sum_{p | q} p^{-k-1}`.
pub fn theorem_budget(k: usize, m: usize, q: &BigUint, eps: f64, delta: f64) -> AdvantageMap {
    let m = m as f64;
    AdvantageMap {
        scale: 1.0 / (3.0 * m),
        loss: delta / (3.0 * m) + 20.5 * eps + prime_loss(k + 1, q),
    }
}

impl Pipeline {
    /// Runs every stage on `input`, stage `i` drawing from `seeds.child(i)`.
    pub fn run(&self, input: Instance, seeds: &SeedStream) -> Result<Outcome<PipelineRun>> {
        let got = Shape::of(&input);
        let want = &self.shapes[0];
        if got.kind != want.kind || got.n != want.n || got.m != want.m || got.q != want.q {
            return Err(chain(
                0,
                format!("pipeline expects {}, got {}", want.describe(), got.describe()),
            ));
        }
        let mut cur = input;
        let mut reports = Vec::with_capacity(self.stages.len());
        for (i, st) in self.stages.iter().enumerate() {
            let mut rng = seeds.child(i as u64).rng();
            let shape = Shape::of(&cur);
            let (_, _, width) = stage_shape(i, st, &shape, self.eps)?;
            let (next, report) = match self.run_stage(st, cur, width, &mut rng)? {
                Outcome::Done(x) => x,
                Outcome::Aborted(a) => return Ok(Outcome::Aborted(a)),
            };
            reports.push(report);
            cur = next;
        }
        Ok(Outcome::Done(PipelineRun { output: cur, reports }))
    }

    fn run_stage<R: Rng + ?Sized>(
        &self,
        st: &Stage,
        cur: Instance,
        width: f64,
        rng: &mut R,
    ) -> Result<Outcome<(Instance, ReductionReport)>> {
        let eps = self.eps;
        let done = |inst: Instance, rep: ReductionReport| Ok(Outcome::Done((inst, rep)));
        match (st, cur) {
            (Stage::NormalForm { .. }, Instance::Lwe(b)) => {
                Ok(normal_form_reduce(&b, width, eps, rng)?.map(|nf| (Instance::Lwe(nf.batch), nf.report)))
            }
            (Stage::FirstErrorless { m }, Instance::Lwe(b)) => {
                Ok(first_errorless_reduce(&b, *m, rng)?.map(|fe| (Instance::Lwe(fe.batch), fe.report)))
            }
            (Stage::ExtLwe { z, .. }, Instance::Lwe(b)) => {
                let z = match z {
                    HintSource::Random => (0..b.len()).map(|_| rng.random::<bool>() as i64).collect(),
                    HintSource::Zero => vec![0; b.len()],
                    HintSource::Fixed(z) => z.clone(),
                };
                let out = extlwe_reduce(&b, &z, width, eps, rng)?;
                done(
                    Instance::ExtLwe {
                        challenge: out.challenge,
                        chi: out.chi,
                    },
                    out.report,
                )
            }
            (Stage::MultiSecret { t }, Instance::ExtLwe { challenge, chi }) => {
                let (ch, _, rep) = multi_secret_reduce(&challenge, chi, *t, rng)?;
                done(Instance::ExtLwe { challenge: ch, chi }, rep)
            }
            (Stage::BinaryFromHints { .. }, Instance::ExtLwe { challenge, chi }) => {
                let (b, rep) = binlwe_from_extlwe(
                    &challenge,
                    chi.alpha(),
                    Some(width),
                    crate::arith::DEFAULT_PRECISION,
                    eps,
                    rng,
                )?;
                done(Instance::Lwe(b), rep)
            }
            (Stage::BinaryZeroHint, Instance::ExtLwe { challenge, chi }) => {
                let (b, rep) = binlwe_zero_hint(&challenge, chi.alpha(), crate::arith::DEFAULT_PRECISION, eps, rng)?;
                done(Instance::Lwe(b), rep)
            }
            (Stage::BinaryFromLwe { n, beta }, Instance::Lwe(b)) => {
                let (b, rep) = binlwe_from_lwe(&b, *n, *beta, eps, rng)?;
                done(Instance::Lwe(b), rep)
            }
            (Stage::PadDimension { alpha }, Instance::Lwe(b)) => {
                let (b, rep) = pad_dimension(&b, *alpha, rng)?;
                done(Instance::Lwe(b), rep)
            }
            (
                Stage::ModSwitch {
                    q_to,
                    k,
                    b_bound,
                    delta,
                    ..
                },
                Instance::Lwe(b),
            ) => {
                let gp = gadget_for(b.params.n, &b.params.q, q_to, *k)?;
                let out = mod_dim_switch(&b, &gp, Some(width), *b_bound, *delta, eps, rng)?;
                done(Instance::Lwe(out.batch), out.report)
            }
            (st, _) => Err(Error::param(
                "stage",
                format!("{} got an instance of the wrong kind", st.name()),
            )),
        }
    }
}
