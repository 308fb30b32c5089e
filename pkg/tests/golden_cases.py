"""Fixed CLI invocations pinned by byte-exact golden files in tests/golden/."""

CASES = {
    "basis_exact.csv": ["basis", "--n", "3", "--p", "1", "--q", "1/2", "--grid", "5", "--exact"],
    "basis_float.csv": ["basis", "--n", "4", "--p", "0.9", "--q", "0.7", "--grid", "5"],
    "nodes_exact.csv": ["nodes", "--n", "2", "--p", "1", "--q", "1", "--alpha", "1", "--beta", "2", "--exact"],
    "moments.csv": ["moments", "--n", "4", "--p", "0.9", "--q", "0.7", "--alpha", "1", "--beta", "2", "--grid", "5"],
    "moments.json": ["moments", "--n", "4", "--p", "0.9", "--q", "0.7", "--alpha", "1", "--beta", "2", "--grid", "5", "--format", "json"],
    "eval.csv": ["eval", "--n", "8", "--p", "0.9", "--q", "0.8", "--function", "abs:1/2", "--grid", "9"],
    "defect_exact.csv": ["defect", "--n", "2", "--p", "1/2", "--q", "1/4", "--grid", "5", "--exact"],
    "converge.csv": [
        "converge", "--n-list", "8,64,512", "--alpha", "1", "--beta", "2",
        "--function", "t", "--function", "t^2", "--function", "abs:1/2", "--grid", "33",
    ],
}
