//! Region colors. `SIMPLEXRANK_PALETTE` names a file with one `#rrggbb`
//! color per line that replaces the built-in palette.

use std::path::Path;

pub const PALETTE_ENV: &str = "SIMPLEXRANK_PALETTE";

const DEFAULT: [&str; simplexrank::decompose::PALETTE_SIZE] = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f", "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
    "#1f77b4", "#aec7e8", "#ffbb78", "#98df8a", "#d62728", "#c5b0d5", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22",
    "#17becf", "#9edae5", "#393b79", "#637939",
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Palette {
    colors: Vec<String>,
}

impl Default for Palette {
    fn default() -> Self {
        Palette {
            colors: DEFAULT.iter().map(|c| c.to_string()).collect(),
        }
    }
}

fn is_hex_color(s: &str) -> bool {
    s.len() == 7 && s.starts_with('#') && s[1..].chars().all(|c| c.is_ascii_hexdigit())
}

impl Palette {
    pub fn from_file(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut colors = Vec::new();
        for (k, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with("//") {
                continue;
            }
            if !is_hex_color(line) {
                anyhow::bail!("{}:{}: `{line}` is not a #rrggbb color", path.display(), k + 1);
            }
            colors.push(line.to_ascii_lowercase());
        }
        if colors.is_empty() {
            anyhow::bail!("{}: palette has no colors", path.display());
        }
        Ok(Palette { colors })
    }

    /// The palette named by the environment, or the default one.
    pub fn from_env() -> anyhow::Result<Self> {
        match std::env::var_os(PALETTE_ENV) {
            Some(path) => Self::from_file(Path::new(&path)),
            None => Ok(Palette::default()),
        }
    }

    pub fn color(&self, index: usize) -> &str {
        &self.colors[index % self.colors.len()]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_palettes() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        std::fs::write(&path, "#000000\n\n#FFFFFF\n").unwrap();
        let p = Palette::from_file(&path).unwrap();
        assert_eq!(p.color(0), "#000000");
        assert_eq!(p.color(3), "#ffffff");
        std::fs::write(&path, "red\n").unwrap();
        assert!(Palette::from_file(&path).is_err());
        assert!(DEFAULT.iter().all(|c| is_hex_color(c)));
    }
}
