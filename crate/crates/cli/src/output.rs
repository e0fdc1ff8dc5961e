use std::path::{Path, PathBuf};

use anyhow::Context;
use idsample_core::report::ArtifactIndex;

/// Output directory of one command, recording every file written into an
/// `index.json`.
pub struct Output {
    dir: PathBuf,
    index: ArtifactIndex,
}

impl Output {
    pub fn create(dir: &Path, command: &str) -> anyhow::Result<Self> {
        std::fs::create_dir_all(dir)
            .with_context(|| format!("creating output directory {}", dir.display()))?;
        Ok(Self {
            dir: dir.to_owned(),
            index: ArtifactIndex::new(command),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn text(
        &mut self,
        name: &str,
        kind: &str,
        description: &str,
        text: &str,
    ) -> anyhow::Result<()> {
        let path = self.path(name);
        std::fs::write(&path, text).with_context(|| format!("writing {}", path.display()))?;
        self.index.add(kind, name, description);
        Ok(())
    }

    pub fn json<T: serde::Serialize>(
        &mut self,
        name: &str,
        kind: &str,
        description: &str,
        value: &T,
    ) -> anyhow::Result<()> {
        let text = serde_json::to_string_pretty(value)? + "\n";
        self.text(name, kind, description, &text)
    }

    /// Lets `write` produce the file itself, then records it.
    pub fn with<F>(
        &mut self,
        name: &str,
        kind: &str,
        description: &str,
        write: F,
    ) -> anyhow::Result<()>
    where
        F: FnOnce(&Path) -> idsample_core::Result<()>,
    {
        let path = self.path(name);
        write(&path).with_context(|| format!("writing {}", path.display()))?;
        self.index.add(kind, name, description);
        Ok(())
    }

    pub fn finish(self) -> anyhow::Result<PathBuf> {
        let path = self.path("index.json");
        self.index.write_json(&path)?;
        Ok(path)
    }
}
