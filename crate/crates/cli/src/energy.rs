//! ctl and binding.

use std::io::Write;
use std::path::Path;

use hbnspin_core::energetics::{
    bundled_binding_inputs, bundled_ctl_records, ctl_diagram, parse_binding_inputs,
    parse_energy_records, parse_energy_records_json, CtlResult, LevelFlag, Transition,
};
use log::warn;

use crate::args::{BindingArgs, CtlArgs, Format};
use crate::error::CliError;
use crate::output::{create_file, header_lines, write_header, Context};

fn read_input(path: &Path) -> Result<String, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    if text.trim().is_empty() {
        return Err(CliError::Usage(format!(
            "{}: input is empty",
            path.display()
        )));
    }
    Ok(text)
}

fn source(input: &Option<std::path::PathBuf>) -> String {
    input
        .as_ref()
        .map(|p| p.display().to_string())
        .unwrap_or_else(|| "bundled".into())
}

fn cell(r: Option<&CtlResult>) -> String {
    match r {
        None => "-".into(),
        Some(r) => match (r.level, r.flag) {
            (None, _) => "unclear".into(),
            (Some(v), LevelFlag::AboveCbm) => format!("{v:.2}*"),
            (Some(v), _) => format!("{v:.2}"),
        },
    }
}

pub fn ctl(ctx: &Context, args: &CtlArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let records = match &args.input {
        None => bundled_ctl_records(),
        Some(path) => {
            let text = read_input(path)?;
            if path
                .extension()
                .is_some_and(|e| e.eq_ignore_ascii_case("json"))
            {
                parse_energy_records_json(&text)?
            } else {
                parse_energy_records(&text)?
            }
        }
    };
    if records.is_empty() {
        return Err(CliError::Usage("no energy records found".into()));
    }
    let diagram = ctl_diagram(&records)?;
    for msg in &diagram.warnings {
        warn!("{msg}");
    }
    let config =
        serde_json::json!({ "input": source(&args.input), "diagram": args.diagram }).to_string();
    let header = header_lines("ctl", &config, "energy records", None);

    if let Some(path) = &args.diagram {
        let mut f = create_file(path)?;
        write_header(&mut f, &header).map_err(|e| CliError::io(path, e))?;
        diagram
            .write_delimited(&mut f)
            .map_err(|e| CliError::io(path, e))?;
        f.flush().map_err(|e| CliError::io(path, e))?;
    }

    let w = |e| CliError::io(Path::new("<stdout>"), e);
    write_header(out, &header).map_err(w)?;
    match ctx.format {
        Format::Csv => diagram.write_delimited(out).map_err(w)?,
        Format::Human => {
            let mut labels: Vec<&str> = Vec::new();
            for r in &diagram.rows {
                if !labels.contains(&r.label.as_str()) {
                    labels.push(&r.label);
                }
            }
            writeln!(
                out,
                "{:<18} {:>16} {:>16}",
                "defect", "(+1|0) eV", "(0|-1) eV"
            )
            .map_err(w)?;
            for label in labels {
                let pair = |t| {
                    format!(
                        "{} ({})",
                        cell(diagram.get(label, t, true)),
                        cell(diagram.get(label, t, false))
                    )
                };
                writeln!(
                    out,
                    "{label:<18} {:>16} {:>16}",
                    pair(Transition::PlusZero),
                    pair(Transition::ZeroMinus)
                )
                .map_err(w)?;
            }
            writeln!(
                out,
                "corrected (uncorrected) relative to the VBM at 0 eV; * above the CBM at {:.3} eV",
                diagram.cbm
            )
            .map_err(w)?;
        }
    }
    Ok(())
}

pub fn binding(ctx: &Context, args: &BindingArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let inputs = match &args.input {
        None => bundled_binding_inputs(),
        Some(path) => parse_binding_inputs(&read_input(path)?)?,
    };
    if inputs.is_empty() {
        return Err(CliError::Usage("no binding records found".into()));
    }
    let rows = inputs
        .iter()
        .map(|i| {
            Ok((
                i.complex.label.as_str(),
                i.constituents.len(),
                i.binding_energy()?,
            ))
        })
        .collect::<Result<Vec<_>, hbnspin_core::Error>>()?;
    let config = serde_json::json!({ "input": source(&args.input) }).to_string();
    let w = |e| CliError::io(Path::new("<stdout>"), e);
    write_header(
        out,
        &header_lines("binding", &config, "energy records", None),
    )
    .map_err(w)?;
    match ctx.format {
        Format::Human => {
            writeln!(out, "{:<18} {:>3} {:>10}", "complex", "m", "E_b (eV)").map_err(w)?;
            for (label, m, eb) in rows {
                writeln!(out, "{label:<18} {m:>3} {eb:>10.2}").map_err(w)?;
            }
        }
        Format::Csv => {
            writeln!(out, "complex,constituents,binding_energy_eV").map_err(w)?;
            for (label, m, eb) in rows {
                writeln!(out, "{label},{m},{eb:.6}").map_err(w)?;
            }
        }
    }
    Ok(())
}
