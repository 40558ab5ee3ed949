//! Support for the acceptance run: locating the NRC lexicon and text
//! fixtures, the anchor-word table, and pass/fail reporting.

use std::path::{Path, PathBuf};

use ousia::corpus::{merge_raw_sum, zipf_from_text, ZipfDistribution};
use ousia::{derive_from_path, Derivation, DerivedLexicon, Error, Result};

fn workspace_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

/// `NRC_VAD_LEXICON`, else `data/NRC-VAD-Lexicon.txt` at the workspace root.
pub fn nrc_path() -> Option<PathBuf> {
    let p = match std::env::var_os("NRC_VAD_LEXICON") {
        Some(p) => PathBuf::from(p),
        None => workspace_root().join("data/NRC-VAD-Lexicon.txt"),
    };
    p.is_file().then_some(p)
}

pub fn load_nrc() -> Option<Derivation> {
    nrc_path().map(|p| derive_from_path(p).expect("NRC lexicon derives"))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fixture {
    Austen,
    Sherlock,
}

impl Fixture {
    pub fn name(self) -> &'static str {
        match self {
            Fixture::Austen => "austen",
            Fixture::Sherlock => "sherlock",
        }
    }

    fn env_var(self) -> &'static str {
        match self {
            Fixture::Austen => "OUSIA_AUSTEN",
            Fixture::Sherlock => "OUSIA_SHERLOCK",
        }
    }

    /// Plain-text files from the environment variable (a file or directory)
    /// or from `fixtures/<name>/`. Empty when nothing is available.
    pub fn files(self) -> Vec<PathBuf> {
        let root = match std::env::var_os(self.env_var()) {
            Some(p) => PathBuf::from(p),
            None => Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(self.name()),
        };
        if root.is_file() {
            return vec![root];
        }
        let Ok(entries) = std::fs::read_dir(&root) else {
            return Vec::new();
        };
        let mut files: Vec<PathBuf> = entries
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.extension().is_some_and(|x| x == "txt"))
            .collect();
        files.sort();
        files
    }

    /// Tokenizes every file and adds the counts together.
    pub fn load(self) -> Result<ZipfDistribution> {
        let slices = self
            .files()
            .iter()
            .map(|p| {
                let text = std::fs::read_to_string(p).map_err(|e| Error::io(p, e))?;
                Ok(zipf_from_text(&text, p.display().to_string()))
            })
            .collect::<Result<Vec<_>>>()?;
        merge_raw_sum(&slices)
    }
}

/// One anchor block: the anchor's PDS scores, its four listed synousionyms
/// and the listed antousionyms.
pub struct Anchor {
    pub term: &'static str,
    pub pds: [f64; 3],
    pub synousionyms: [&'static str; 4],
    pub antousionyms: &'static [&'static str],
}

pub const ANCHORS: [Anchor; 4] = [
    Anchor {
        term: "wisdom",
        pds: [0.388, -0.432, -0.158],
        synousionyms: ["education", "healthy", "trustworthy", "reliable"],
        antousionyms: &["bullshit", "shitty", "nauseate", "weeping", "shame", "diarrhea"],
    },
    Anchor {
        term: "success",
        pds: [0.758, -0.050, 0.095],
        synousionyms: ["almighty", "triumphant", "champion", "victorious"],
        antousionyms: &["sorrow", "tasteless", "idle", "empty", "void"],
    },
    Anchor {
        term: "volcanic",
        pds: [0.322, 0.407, -0.045],
        synousionyms: ["shelling", "artillery", "wild", "rifles"],
        antousionyms: &["couch", "mellow", "pillow", "tortoise", "quilt", "cotton"],
    },
    Anchor {
        term: "homicide",
        pds: [-0.005, 0.681, 0.011],
        synousionyms: ["killer", "psychopath", "bloodshed", "violate"],
        antousionyms: &["natural", "tranquil", "softness", "serenity", "comfortable", "calmness"],
    },
];

/// Published nine-column scores for the anchors and their neighbours.
const ANCHOR_TABLE: &str = "\
wisdom	0.430	-0.198	0.371	0.579	-0.031	-0.158	0.388	-0.432	-0.158
education	0.396	-0.225	0.340	0.539	-0.065	-0.167	0.336	-0.427	-0.167
healthy	0.438	-0.181	0.318	0.558	-0.047	-0.108	0.362	-0.428	-0.108
trustworthy	0.469	-0.185	0.324	0.589	-0.052	-0.100	0.379	-0.453	-0.100
reliable	0.412	-0.259	0.375	0.575	-0.076	-0.202	0.353	-0.460	-0.202
bullshit	-0.458	0.176	-0.317	-0.575	0.046	0.095	-0.373	0.439	0.095
shitty	-0.480	0.179	-0.337	-0.604	0.042	0.100	-0.397	0.456	0.100
nauseate	-0.438	0.160	-0.324	-0.558	0.026	0.101	-0.376	0.413	0.101
weeping	-0.418	0.188	-0.332	-0.549	0.042	0.131	-0.359	0.418	0.131
shame	-0.440	0.170	-0.345	-0.572	0.023	0.120	-0.388	0.421	0.120
diarrhea	-0.408	0.184	-0.357	-0.552	0.023	0.151	-0.374	0.407	0.151
success	0.459	0.380	0.481	0.571	0.501	0.095	0.758	-0.050	0.095
almighty	0.438	0.374	0.458	0.543	0.487	0.098	0.728	-0.040	0.098
triumphant	0.449	0.337	0.472	0.565	0.462	0.073	0.726	-0.072	0.073
champion	0.390	0.380	0.445	0.494	0.492	0.087	0.698	-0.001	0.087
victorious	0.384	0.386	0.446	0.489	0.499	0.087	0.698	0.007	0.087
sorrow	-0.448	-0.265	-0.336	-0.509	-0.329	-0.127	-0.593	0.127	-0.127
tasteless	-0.354	-0.304	-0.352	-0.430	-0.385	-0.092	-0.576	0.032	-0.092
idle	-0.321	-0.333	-0.388	-0.414	-0.434	-0.068	-0.600	-0.014	-0.068
empty	-0.312	-0.317	-0.419	-0.424	-0.439	-0.033	-0.610	-0.011	-0.033
void	-0.365	-0.337	-0.370	-0.443	-0.420	-0.103	-0.611	0.016	-0.103
volcanic	-0.156	0.410	0.281	-0.061	0.515	-0.045	0.322	0.407	-0.045
shelling	-0.163	0.417	0.273	-0.072	0.518	-0.039	0.316	0.417	-0.039
artillery	-0.150	0.412	0.294	-0.050	0.523	-0.050	0.335	0.405	-0.050
wild	-0.188	0.422	0.250	-0.105	0.514	-0.032	0.289	0.438	-0.032
rifles	-0.163	0.364	0.265	-0.068	0.470	-0.062	0.284	0.380	-0.062
couch	0.094	-0.418	-0.302	-0.002	-0.524	0.025	-0.372	-0.369	0.025
mellow	0.133	-0.431	-0.235	0.066	-0.504	-0.009	-0.310	-0.403	-0.009
pillow	0.163	-0.372	-0.305	0.049	-0.498	0.085	-0.317	-0.387	0.085
tortoise	0.173	-0.422	-0.250	0.092	-0.511	0.025	-0.297	-0.427	0.025
quilt	0.143	-0.377	-0.274	0.048	-0.482	0.052	-0.307	-0.375	0.052
cotton	0.139	-0.429	-0.260	0.059	-0.517	0.012	-0.324	-0.407	0.012
homicide	-0.490	0.473	0.018	-0.485	0.478	0.011	-0.005	0.681	0.011
killer	-0.459	0.471	0.043	-0.446	0.485	0.008	0.028	0.658	0.008
psychopath	-0.460	0.443	0.036	-0.446	0.458	-0.003	0.009	0.640	-0.003
bloodshed	-0.452	0.442	0.025	-0.444	0.450	0.008	0.004	0.633	0.008
violate	-0.439	0.470	0.019	-0.440	0.468	0.033	0.020	0.642	0.033
natural	0.354	-0.382	-0.019	0.354	-0.382	-0.026	-0.020	-0.520	-0.026
tranquil	0.417	-0.406	-0.145	0.351	-0.480	0.078	-0.091	-0.588	0.078
softness	0.375	-0.414	-0.098	0.338	-0.455	0.021	-0.082	-0.561	0.021
serenity	0.400	-0.378	0.057	0.429	-0.345	-0.054	0.060	-0.547	-0.054
comfortable	0.427	-0.337	-0.027	0.406	-0.361	0.039	0.032	-0.542	0.039
calmness	0.434	-0.395	-0.106	0.383	-0.453	0.065	-0.049	-0.591	0.065
";

/// The anchor table as a scored lexicon, for runs that need no external data.
pub fn anchor_lexicon() -> DerivedLexicon {
    DerivedLexicon::parse_tsv(ANCHOR_TABLE.as_bytes()).expect("anchor table parses")
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl Status {
    fn tag(self) -> &'static str {
        match self {
            Status::Pass => "[PASS]",
            Status::Fail => "[FAIL]",
            Status::Skip => "[SKIP]",
        }
    }
}

/// Collects detail checks for one criterion; the criterion passes when every
/// check does.
#[derive(Debug, Default)]
pub struct Checks {
    lines: Vec<(bool, String)>,
}

impl Checks {
    pub fn check(&mut self, ok: bool, detail: impl Into<String>) -> bool {
        self.lines.push((ok, detail.into()));
        ok
    }

    /// `|got − want| ≤ tol`.
    pub fn near(&mut self, what: &str, got: f64, want: f64, tol: f64) -> bool {
        self.check(
            (got - want).abs() <= tol,
            format!("{what} = {got:.4} (want {want} ± {tol})"),
        )
    }

    pub fn status(&self) -> Status {
        if self.lines.iter().all(|l| l.0) {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    pub fn details(&self) -> impl Iterator<Item = &(bool, String)> {
        self.lines.iter()
    }
}

/// Prints one result line for a criterion followed by its detail lines.
pub fn report(id: &str, title: &str, status: Status, checks: &Checks, note: &str) {
    let mut line = format!("{} {id} {title}", status.tag());
    if !note.is_empty() {
        line.push_str(": ");
        line.push_str(note);
    }
    println!("{line}");
    for (ok, d) in checks.details() {
        println!("        {} {d}", if *ok { "ok  " } else { "MISS" });
    }
}
