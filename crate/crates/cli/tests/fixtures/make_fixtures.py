"""Regenerates the pipeline fixtures and the golden annotated.jsonl.

The golden file comes from a brute-force linear scan over the raw dumps,
written independently of the Rust index.
"""
import json
import random
from pathlib import Path

HERE = Path(__file__).parent
REPO = "acme/widget"
FILES = [
    "README.md", "core/lib.rs", "core/net/http.rs", "core/net/tls.rs",
    "ui/app.ts", "ui/views/main.ts", "ui/views/list.ts", "docs/guide.md",
]
DEVS = ["alice", "bob", "carol", "dave", "erin"]


def spell(path, rng):
    # exercise path normalization in the raw dump
    roll = rng.random()
    if roll < 0.1:
        return "./" + path
    if roll < 0.2:
        return path.replace("/", "\\")
    return path


def normalize(path):
    parts = [p for p in path.replace("\\", "/").split("/") if p not in ("", ".")]
    return "/".join(parts)


def key(path, level):
    path = normalize(path)
    if level == "repo":
        return REPO
    if "/" not in path:
        return "<root>"
    return path.split("/")[0] if level == "sys" else path.rsplit("/", 1)[0]


def build():
    rng = random.Random(20240611)
    commits, pulls, comments = [], [], []
    for i in range(60):
        files = sorted(set(spell(rng.choice(FILES), rng) for _ in range(rng.randint(1, 3))))
        commits.append({
            "sha": f"{i:040x}",
            "author": rng.choice(DEVS),
            "timestamp": 1000 + 10 * rng.randint(0, 40),
            "files": files,
            "is_merge": i % 13 == 12,
        })
    for n in range(1, 21):
        files = sorted(set(rng.choice(FILES) for _ in range(rng.randint(1, 3))))
        reviewers = sorted(set(rng.choice(DEVS) for _ in range(rng.randint(1, 2))))
        pulls.append({"number": n, "closed_at": 1000 + 10 * rng.randint(0, 40), "files": files, "reviewers": reviewers})
    texts = [
        "Please close the stream before returning.",
        "Why is the lock not released here?",
        "This allocation could be hoisted out of the loop.",
        "Consider adding a unit test for the empty case.",
        "Nit: typo in the doc comment.",
        "Should this handle the timeout error?",
    ]
    for i in range(18):
        reviewer = rng.choice(DEVS)
        text = rng.choice(texts)
        comments.append({
            "id": f"c{i:02}",
            "repo": REPO,
            "pr_number": rng.randint(1, 20),
            "reviewer": reviewer,
            # multiples of 10 collide with history timestamps on purpose
            "timestamp": 1000 + 10 * rng.randint(5, 45),
            "file_path": rng.choice(FILES),
            "code_hunk": "@@ -1,3 +1,4 @@\n fn main() {\n+    run();\n }",
            "comment_text": text,
            "thread": i % 3,
        })
    comments.append({**comments[0], "id": "n1", "reviewer": None})
    comments.append({**comments[1], "id": "n2", "reviewer": "dependabot"})
    comments.append({**comments[2], "id": "n3", "comment_text": "```suggestion\nlet x = 1;\n```\n"})
    comments.append({**comments[3], "id": "n4", "reviewer": "talbot", "comment_text": "Looks racy to me."})
    comments.append({**comments[4], "id": "n5", "reviewer": "Renovate-Bot"})
    return commits, pulls, comments


def kept(comment, bots, allow):
    reviewer = comment["reviewer"]
    if reviewer is None or not reviewer.strip():
        return False
    name = reviewer.lower()
    if (name.endswith("bot") or name in bots) and name not in allow:
        return False
    lines, inside = [], False
    for line in comment["comment_text"].split("\n"):
        if not inside and line.lstrip().startswith("```suggestion"):
            inside = True
        elif inside and line.strip().startswith("```") and set(line.strip()) == {"`"}:
            inside = False
        elif not inside:
            lines.append(line)
    return bool("\n".join(lines).strip())


def ratio(part, whole):
    return 0.0 if whole == 0 else part / whole


def annotate(comment, commits, pulls):
    dev, t, path = comment["reviewer"], comment["timestamp"], comment["file_path"]
    out = dict(comment)
    for level in ("repo", "sys", "pkg"):
        k = key(path, level)
        total = mine = 0
        for c in commits:
            if c["is_merge"] or c["timestamp"] >= t:
                continue
            if k in {key(f, level) for f in c["files"]}:
                total += 1
                mine += c["author"] == dev
        out[f"aco_{level}"] = ratio(mine, total)
        total = mine = 0
        for p in pulls:
            if p["closed_at"] >= t:
                continue
            if k in {key(f, level) for f in p["files"]}:
                total += 1
                mine += dev in p["reviewers"]
        out[f"rso_{level}"] = ratio(mine, total)
    return out


def dump(name, rows):
    with open(HERE / name, "w") as f:
        for row in rows:
            f.write(json.dumps(row, separators=(",", ":")) + "\n")


def main():
    commits, pulls, comments = build()
    bots = {"dependabot"}
    allow = {"talbot"}
    dump("commits.jsonl", commits)
    dump("pulls.jsonl", pulls)
    dump("comments.jsonl", comments)
    (HERE / "botlist.txt").write_text("# known automation accounts\ndependabot\n")
    (HERE / "allowlist.txt").write_text("talbot\n")
    dump("annotated.golden.jsonl", [annotate(c, commits, pulls) for c in comments if kept(c, bots, allow)])


if __name__ == "__main__":
    main()
