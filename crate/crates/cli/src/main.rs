use std::io::{Read, Write};
use std::process::ExitCode;

use ainfty_cli::format::to_json_text;
use ainfty_cli::{execute, Cli};
use clap::Parser;

fn read_input(path: &str) -> std::io::Result<String> {
    if path == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path)
    }
}

fn write_output(path: &str, text: &str) -> std::io::Result<()> {
    if path == "-" {
        std::io::stdout().write_all(text.as_bytes())
    } else {
        std::fs::write(path, text)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let text = match read_input(cli.command.input()) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("cannot read {}: {e}", cli.command.input());
            return ExitCode::from(2);
        }
    };
    let outcome = execute(&cli, &text);
    let report = to_json_text(&outcome.report);

    let convert = matches!(cli.command, ainfty_cli::Command::Convert { .. });
    let instance_target = match cli.command.out() {
        Some(p) => Some(p.to_string()),
        // convert prints the instance itself unless asked to write it elsewhere
        None if convert => Some("-".to_string()),
        None => None,
    };
    let mut result = Ok(());
    if let (Some(path), Some(inst)) = (&instance_target, &outcome.instance) {
        result = write_output(path, inst);
    }
    let report_target = match &cli.report {
        Some(p) => Some(p.to_string_lossy().into_owned()),
        None if instance_target.as_deref() == Some("-") && outcome.instance.is_some() => None,
        None => Some("-".to_string()),
    };
    if let (Ok(()), Some(path)) = (&result, report_target) {
        result = write_output(&path, &report);
    }
    if outcome.exit == 2 {
        if let Some(msg) = outcome.report.get("error") {
            eprintln!("{}", msg.as_str().unwrap_or_default());
        }
    }
    match result {
        Ok(()) => ExitCode::from(outcome.exit as u8),
        Err(e) => {
            eprintln!("cannot write output: {e}");
            ExitCode::from(2)
        }
    }
}
