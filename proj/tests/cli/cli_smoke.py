"""End-to-end checks of the graad CLI: exit codes, workspace files, outputs.

usage: cli_smoke.py path/to/graad
"""

import filecmp
import os
import re
import struct
import subprocess
import sys
import tempfile
from pathlib import Path

GRAAD = sys.argv[1]
failures = []


def graad(ws, *args, expect=0):
    r = subprocess.run([GRAAD, "-C", str(ws), *map(str, args)], capture_output=True, text=True)
    if r.returncode != expect:
        failures.append(f"graad {' '.join(map(str, args))}: exit {r.returncode}, wanted {expect}\n"
                        f"  stdout: {r.stdout.strip()}\n  stderr: {r.stderr.strip()}")
    return r


def check(cond, what):
    if not cond:
        failures.append(what)
    print(("ok   " if cond else "FAIL ") + what)


def fields(blob):
    out, pos = [], 0
    while pos < len(blob):
        (n,) = struct.unpack(">I", blob[pos:pos + 4])
        out.append(blob[pos + 4:pos + 4 + n])
        pos += 4 + n
    return out


def join(fs):
    return b"".join(struct.pack(">I", len(f)) + f for f in fs)


def evidence(transcript):
    for line in Path(transcript).read_text().splitlines():
        if line.startswith("! evidence "):
            return bytes.fromhex(line[len("! evidence "):])
    return None


def transcript_of(r):
    m = re.search(r"^transcript: (.+)$", r.stdout, re.M)
    return m.group(1) if m else None


def keys_of(r):
    return re.findall(r"^key \S+: ([0-9a-f]+)$", r.stdout, re.M)


with tempfile.TemporaryDirectory() as tmp:
    tmp = Path(tmp)
    ws = tmp / "ws"

    # init: validation and determinism
    graad(ws, "init", "--backend", "toy", "--m", "5", "--w", "2", expect=2)
    check(not (ws / "workspace.json").exists(), "rejected init leaves no workspace")
    graad(ws, "init", "--backend", "toy", "--m", "4", "--w", "2", "--seed", "7")
    graad(ws, "init", "--backend", "toy", "--m", "4", "--w", "2", expect=2)
    twin = tmp / "twin"
    graad(twin, "init", "--backend", "toy", "--m", "4", "--w", "2", "--seed", "7")
    same = all(filecmp.cmp(ws / f, twin / f, shallow=False)
               for f in ["params.json", "hss.json", "prose.json", "directory.txt"])
    check(same, "seeded init is byte-identical")

    # register
    for name, grp in [("a0", 0), ("a1", 0), ("b0", 1), ("c0", 2), ("d0", 3)]:
        r = graad(ws, "register", name, "--group", grp)
        check(re.fullmatch(rf"{name} [0-9a-f]{{72}}\n", r.stdout) is not None,
              f"register {name} prints its label")
    graad(ws, "register", "a0", "--group", 1, expect=2)
    graad(ws, "register", "zz", "--group", 9, expect=2)
    graad(ws, "register", "bad name", "--group", 0, expect=2)
    d = graad(ws, "dir").stdout
    check(d.count("\n") >= 5, "dir lists the groups")

    # sessions
    r = graad(ws, "run", "na", "a0", "a1")
    k = keys_of(r)
    check("session: accepted" in r.stdout and len(k) == 2 and k[0] == k[1], "na same group: equal keys")
    na_log = transcript_of(r)
    check(na_log is not None and evidence(na_log) is not None, "na transcript carries evidence")

    r = graad(ws, "run", "cn", "a0", "a1")
    k = keys_of(r)
    check("session: accepted" in r.stdout and len(k) == 2 and k[0] == k[1], "cn same group: equal keys")

    r = graad(ws, "run", "cn", "a0", "c0", expect=1)
    check("group check failed" in r.stdout, "cn cross group aborts at the group check")
    graad(ws, "run", "na", "a0", "c0", expect=1)

    r = graad(ws, "run", "na", "a0", "a1", "--tamper", "step3:byte12", expect=1)
    log = Path(transcript_of(r)).read_text()
    check("! tamper step 3 byte 12" in log, "tamper is noted in the transcript")
    check(evidence(transcript_of(r)) is None, "aborted na has no evidence")

    r = graad(ws, "run", "cn", "a0", "a1", "--drop", "step3", expect=1)
    graad(ws, "run", "cn", "a0", "a1", "--tamper", "nonsense", expect=2)
    graad(ws, "run", "cn", "a0", "nobody", expect=2)

    # trace
    r = graad(ws, "trace", na_log)
    check("trace: accepted" in r.stdout and "U group 0" in r.stdout and "V group 0" in r.stdout,
          "trace recovers both group indices")

    r2 = graad(ws, "run", "na", "c0", "b0", expect=1)  # different groups
    r2 = graad(ws, "run", "na", "a1", "a0")
    ev_a, ev_b = evidence(na_log), evidence(transcript_of(r2))
    fa, fb = fields(ev_a), fields(ev_b)
    check(len(fa) == 14 and join(fa) == ev_a, "evidence splits into 14 fields")
    spliced_rejected = 0
    for i in range(1, 14):
        if fa[i] == fb[i]:
            continue
        spliced = fa[:i] + [fb[i]] + fa[i + 1:]
        p = tmp / f"splice{i}.hex"
        p.write_text(join(spliced).hex())
        rr = graad(ws, "trace", p, expect=1)
        spliced_rejected += "trace: rejected" in rr.stdout
    check(spliced_rejected >= 10, f"spliced evidence rejected ({spliced_rejected} fields)")
    flipped = bytearray(ev_a)
    flipped[len(flipped) // 2] ^= 1
    p = tmp / "flip.hex"
    p.write_text(flipped.hex())
    graad(ws, "trace", p, expect=1)

    # revocation
    r = graad(ws, "revoke", "a1")
    check("crl size 1" in r.stdout, "revoke grows the CRL")
    graad(ws, "revoke", "nobody", expect=2)
    graad(ws, "run", "na", "a0", "a1", expect=1)
    r = graad(ws, "trace", na_log)
    check("trace: accepted" in r.stdout, "revoked participant is still traceable")

    # corrupted workspace
    bad = tmp / "bad"
    graad(bad, "init", "--backend", "toy", "--m", "4", "--w", "2", "--seed", "1")
    (bad / "prose.json").write_text("{ not json")
    graad(bad, "dir", expect=3)
    graad(tmp / "missing", "dir", expect=3)

    # asr
    r = graad(ws, "asr", "--mode", "na", "--c-t", 2, "--c-rd", 11.091, "--analytic")
    rows = r.stdout.strip().splitlines()
    check(rows[0] == "mode,c_t,c_rd,c_r,analytic,sim,ci_half,arrivals,seed", "asr csv header")
    check(rows[1].split(",")[4] == "0.799993", "asr na analytic 0.799993")
    r = graad(ws, "asr", "--mode", "cn", "--c-t", 2, "--c-rd", 83.022, "--c-r", 12.915, "--analytic")
    check(abs(float(r.stdout.splitlines()[1].split(",")[4]) - 0.80) <= 0.005, "asr cn analytic 0.80")
    graad(ws, "asr", "--mode", "cn", "--c-t", 2, "--c-rd", 10, expect=2)
    s1 = graad(ws, "asr", "--mode", "na", "--c-t", 2, "--c-rd", 10, "--sim", "--arrivals", 20000, "--seed", 5)
    s2 = graad(ws, "asr", "--mode", "na", "--c-t", 2, "--c-rd", 10, "--sim", "--arrivals", 20000, "--seed", 5)
    check(s1.stdout == s2.stdout and s1.stdout.count("\n") == 2, "seeded simulation is reproducible")
    grid = tmp / "grid.csv"
    grid.write_text("na,2,5\nna,2,10\nna,2,20\ncn,2,20,10\ncn,2,50,20\n")
    out = tmp / "sweep.csv"
    r = graad(ws, "asr", "--sweep", grid, "--arrivals", 20000, "--out", out)
    check("monotonicity audit: pass" in r.stderr and len(out.read_text().splitlines()) == 6,
          "sweep writes 5 rows and passes the audit")

    # bench
    r = graad(ws, "bench", "--reps", 2, "--backend", "toy")
    cats = [(l.split(",")[0], l.split(",")[1]) for l in r.stdout.splitlines()[1:]]
    check(len(cats) == len(set(cats)) and len(cats) == 25, "bench rows appear once each")
    sel = {c for c, w in cats if w != "-"}
    check(sel == {"gSelect", "gSelectVer", "uSelect", "uSelectVer"}, "only selection rows vary with w")

if failures:
    print("\n".join(["", "failures:"] + failures))
    sys.exit(1)
print("all CLI checks passed")
