//! Scripted repositories reproducing the three ownership-divergence
//! scenarios. Used by the test suites and the Python smoke test; every
//! commit carries fixed author/committer dates so object ids are stable.

use std::path::{Path, PathBuf};
use std::process::Command;

use crate::error::{Error, Result};
use crate::snapshot::ReleaseWindow;

pub const CHRIS: &str = "chris@example.com";
pub const PAT: &str = "pat@example.com";
pub const JANE: &str = "jane@example.com";
pub const BOB: &str = "bob@example.com";
pub const MARY: &str = "mary@example.com";
pub const LINDA: &str = "linda@example.com";

const EPOCH: i64 = 1_600_000_000;

/// Builder over a fresh repository with hermetic git configuration.
pub struct FixtureRepo {
    root: PathBuf,
    clock: i64,
}

impl FixtureRepo {
    pub fn init(root: &Path) -> Result<Self> {
        std::fs::create_dir_all(root).map_err(|e| Error::io(root, e))?;
        let repo = Self {
            root: root.to_path_buf(),
            clock: EPOCH,
        };
        repo.git(&["init", "-q", "-b", "main"], None)?;
        Ok(repo)
    }

    pub fn path(&self) -> &Path {
        &self.root
    }

    fn git(&self, args: &[&str], author: Option<(&str, &str, i64)>) -> Result<()> {
        let mut cmd = Command::new("git");
        cmd.arg("-C")
            .arg(&self.root)
            .args(["-c", "commit.gpgsign=false", "-c", "tag.gpgsign=false"])
            .args(args)
            .env("GIT_CONFIG_NOSYSTEM", "1")
            .env("GIT_CONFIG_GLOBAL", "/dev/null")
            .env("GIT_AUTHOR_NAME", "fixture")
            .env("GIT_AUTHOR_EMAIL", "fixture@example.com")
            .env("GIT_COMMITTER_NAME", "fixture")
            .env("GIT_COMMITTER_EMAIL", "fixture@example.com");
        if let Some((name, email, when)) = author {
            let date = format!("{when} +0000");
            cmd.env("GIT_AUTHOR_NAME", name)
                .env("GIT_AUTHOR_EMAIL", email)
                .env("GIT_AUTHOR_DATE", &date)
                .env("GIT_COMMITTER_NAME", name)
                .env("GIT_COMMITTER_EMAIL", email)
                .env("GIT_COMMITTER_DATE", &date);
        } else {
            let date = format!("{} +0000", self.clock);
            cmd.env("GIT_AUTHOR_DATE", &date).env("GIT_COMMITTER_DATE", &date);
        }
        let out = cmd
            .output()
            .map_err(|e| Error::Vcs(format!("failed to spawn git: {e}")))?;
        if !out.status.success() {
            return Err(Error::Vcs(format!(
                "fixture git {args:?} failed: {}",
                String::from_utf8_lossy(&out.stderr)
            )));
        }
        Ok(())
    }

    pub fn write(&self, path: &str, content: &str) -> Result<()> {
        let full = self.root.join(path);
        if let Some(parent) = full.parent() {
            std::fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
        }
        std::fs::write(&full, content).map_err(|e| Error::io(&full, e))
    }

    /// Writes the given files and commits them as `name <email>`.
    pub fn commit(&mut self, name: &str, email: &str, files: &[(&str, String)]) -> Result<()> {
        for (path, content) in files {
            self.write(path, content)?;
        }
        self.git(&["add", "-A"], None)?;
        self.clock += 3600;
        let message = format!("change by {name}");
        self.git(
            &["commit", "-q", "--allow-empty", "-m", &message],
            Some((name, email, self.clock)),
        )
    }

    pub fn tag(&self, name: &str) -> Result<()> {
        self.git(&["tag", name], None)
    }
}

fn lines(prefix: &str, range: std::ops::Range<usize>) -> String {
    range.map(|i| format!("    int {prefix}{i} = {i};\n")).collect()
}

/// Scenario 1 on `A.java`: chris writes 84 lines in one commit, pat then
/// appends two lines in each of three commits. Tagged `r1`.
pub fn scenario_one_steps(repo: &mut FixtureRepo) -> Result<()> {
    let mut body = lines("chris", 0..84);
    repo.commit("Chris", CHRIS, &[("A.java", body.clone())])?;
    for round in 0..3 {
        body.push_str(&lines(&format!("pat{round}_"), 0..2));
        repo.commit("Pat", PAT, &[("A.java", body.clone())])?;
    }
    Ok(())
}

/// Scenario 2 on `B.java`: jane creates and twice rewrites ten lines, then
/// bob rewrites all ten.
pub fn scenario_two_steps(repo: &mut FixtureRepo) -> Result<()> {
    for round in 0..3 {
        repo.commit("Jane", JANE, &[("B.java", lines(&format!("jane{round}_"), 0..10))])?;
    }
    repo.commit("Bob", BOB, &[("B.java", lines("bob", 0..10))])
}

/// Scenario 3 on `C.java`, first half: mary writes 100 lines.
pub fn scenario_three_first_release(repo: &mut FixtureRepo) -> Result<()> {
    repo.commit("Mary", MARY, &[("C.java", lines("mary", 0..100))])
}

/// Scenario 3, second half: linda rewrites five of mary's lines.
pub fn scenario_three_second_release(repo: &mut FixtureRepo) -> Result<()> {
    let mut body = lines("linda", 0..5);
    body.push_str(&lines("mary", 5..100));
    repo.commit("Linda", LINDA, &[("C.java", body)])
}

pub fn scenario_one(root: &Path) -> Result<FixtureRepo> {
    let mut repo = FixtureRepo::init(root)?;
    scenario_one_steps(&mut repo)?;
    repo.tag("r1")?;
    Ok(repo)
}

pub fn scenario_two(root: &Path) -> Result<FixtureRepo> {
    let mut repo = FixtureRepo::init(root)?;
    scenario_two_steps(&mut repo)?;
    repo.tag("r1")?;
    Ok(repo)
}

/// Tags `r1` after mary's commit and `r2` after linda's.
pub fn scenario_three(root: &Path) -> Result<FixtureRepo> {
    let mut repo = FixtureRepo::init(root)?;
    scenario_three_first_release(&mut repo)?;
    repo.tag("r1")?;
    scenario_three_second_release(&mut repo)?;
    repo.tag("r2")?;
    Ok(repo)
}

/// All three scenarios in one history: `r1` holds scenarios 1 and 2 plus
/// mary's `C.java`; `r2` adds linda's change. A README is committed too so
/// the extension filter has something to reject.
pub fn combined(root: &Path) -> Result<FixtureRepo> {
    let mut repo = FixtureRepo::init(root)?;
    repo.commit("Chris", CHRIS, &[("README.md", "fixture\n".to_string())])?;
    scenario_one_steps(&mut repo)?;
    scenario_two_steps(&mut repo)?;
    scenario_three_first_release(&mut repo)?;
    repo.tag("r1")?;
    scenario_three_second_release(&mut repo)?;
    repo.tag("r2")?;
    Ok(repo)
}

/// The two release windows of [`combined`] (and of [`scenario_three`]).
pub fn combined_windows() -> Vec<ReleaseWindow> {
    vec![
        ReleaseWindow::new("r1", "", "r1"),
        ReleaseWindow::new("r2", "r1", "r2"),
    ]
}
