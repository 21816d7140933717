use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context};
use clap::Args;

use msrcpspr::instance::{
    default_extension, load_extension, parse_extension, parse_psplib, AdaptationOptions, Extension, PsplibProject,
};
use msrcpspr::Instance;

#[derive(Debug, Args)]
pub struct InstanceArgs {
    /// PSPLIB single-mode `.sm` file.
    #[arg(long)]
    pub instance: PathBuf,
    /// JSON sidecar with skills, costs and breakdown rates. Defaults to
    /// `<instance stem>.ext.json` beside the instance when that exists.
    #[arg(long)]
    pub extension: Option<PathBuf>,
    /// Derive the sidecar with the default adaptation instead of reading one.
    #[arg(long, conflicts_with = "extension")]
    pub default_adaptation: bool,
}

pub fn read_project(path: &Path) -> anyhow::Result<PsplibProject> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_psplib(&text).with_context(|| format!("parsing {}", path.display()))
}

/// `dir/stem.ext.json` for `dir/stem.sm`.
pub fn sidecar_path(instance: &Path) -> PathBuf {
    instance.with_extension("ext.json")
}

fn resolve_extension(
    project: &PsplibProject,
    instance: &Path,
    explicit: Option<&Path>,
    adapt: bool,
) -> anyhow::Result<Extension> {
    if adapt {
        return Ok(default_extension(project, &AdaptationOptions::default()));
    }
    let path = match explicit {
        Some(p) => p.to_path_buf(),
        None => {
            let guess = sidecar_path(instance);
            if !guess.exists() {
                bail!(
                    "extension required: no sidecar given and {} does not exist (pass --extension or --default-adaptation)",
                    guess.display()
                );
            }
            guess
        }
    };
    let text = fs::read_to_string(&path).with_context(|| format!("extension required: cannot read {}", path.display()))?;
    parse_extension(&text).with_context(|| format!("parsing {}", path.display()))
}

pub fn load(path: &Path, extension: Option<&Path>, adapt: bool) -> anyhow::Result<Instance> {
    let project = read_project(path)?;
    let extension = resolve_extension(&project, path, extension, adapt)?;
    let loaded = load_extension(&project, &extension)?;
    for w in &loaded.warnings {
        log::warn!("{w}");
    }
    Ok(loaded.instance)
}

impl InstanceArgs {
    pub fn load(&self) -> anyhow::Result<Instance> {
        load(&self.instance, self.extension.as_deref(), self.default_adaptation)
    }
}

pub fn write(dir: &Path, name: &str, contents: &str) -> anyhow::Result<PathBuf> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let path = dir.join(name);
    fs::write(&path, contents).with_context(|| format!("writing {}", path.display()))?;
    log::info!("wrote {}", path.display());
    Ok(path)
}
