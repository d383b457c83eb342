//! Output plumbing: provenance headers, content hashing, and atomic file
//! writes so interrupted runs never leave half a table behind.

use sha2::{Digest, Sha256};
use std::io::Write;
use std::path::Path;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

fn sha256_hex(payload: &str) -> String {
    let mut hasher = Sha256::new();
    hasher.update(payload.as_bytes());
    let digest = hasher.finalize();
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// Wrap a JSON payload with version, config echo, and a hash of the
/// payload itself. No timestamps: identical runs are byte-identical.
pub fn json_document(config: &str, result: serde_json::Value) -> String {
    let payload = serde_json::to_string(&result).expect("serializable result");
    let doc = serde_json::json!({
        "meta": {
            "version": VERSION,
            "config": config,
            "content_sha256": sha256_hex(&payload),
        },
        "result": result,
    });
    let mut s = serde_json::to_string_pretty(&doc).expect("serializable document");
    s.push('\n');
    s
}

/// Prefix a CSV body with comment-style provenance lines.
pub fn csv_document(config: &str, body: &str) -> String {
    format!(
        "# version={VERSION}\n# config={config}\n# sha256={}\n{body}",
        sha256_hex(body)
    )
}

/// Write via a sibling temp file and rename, or print to stdout.
pub fn emit(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        None => {
            print!("{content}");
            std::io::stdout().flush()
        }
        Some(path) => {
            let dir = path.parent().unwrap_or_else(|| Path::new("."));
            let mut tmp = dir.to_path_buf();
            let name = path
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_else(|| "out".to_string());
            tmp.push(format!(".{name}.tmp"));
            {
                let mut file = std::fs::File::create(&tmp)?;
                file.write_all(content.as_bytes())?;
                file.sync_all()?;
            }
            std::fs::rename(&tmp, path)
        }
    }
}
