//! Pairwise concurrence by every route that applies, for a few rings.

use spinring::model::ModelSpec;
use spinring::report::RingAnalysis;

fn show(label: &str, spec: ModelSpec, t: f64) -> spinring::Result<()> {
    let r = RingAnalysis::new(&spec, (1, 2))?.at(t)?;
    let c = &r.concurrence;
    let fmt = |x: Option<f64>| x.map_or("-".to_string(), |v| format!("{v:.10}"));
    println!(
        "{label:<22} T={t:<5} wootters {:.10}  x-form {}  correlation {}  energy {} ({:?})  spread {:.1e}",
        c.wootters,
        fmt(c.x_form),
        fmt(c.correlation_form),
        fmt(c.energy_form),
        c.energy_route,
        c.max_disagreement
    );
    Ok(())
}

fn main() -> spinring::Result<()> {
    show("N=2 isotropic", ModelSpec::xxx(2, 1.0), 1.0)?;
    show("N=3 isotropic", ModelSpec::xxx(3, 1.0), 0.1)?;
    show("N=4 isotropic", ModelSpec::xxx(4, 1.0), 0.5)?;
    show("N=4 ferromagnet", ModelSpec::xxx(4, -1.0), 0.5)?;
    show("N=6 XXZ delta=0.5", ModelSpec::xxz(6, 1.0, 0.5), 0.5)?;
    show("N=6 field B=1", ModelSpec::xxx(6, 1.0).with_field(1.0), 0.5)?;
    show("N=5 XX in field", ModelSpec::uniform(5, 1.0, 0.0, 0.5), 0.3)?;
    Ok(())
}
