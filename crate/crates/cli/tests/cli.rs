use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_str().unwrap().to_string()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infshift")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

#[test]
fn blocks_of_g1() {
    let shift = format!("edges:{}", fixture("g1.graph"));
    let o = run(&["blocks", "--shift", &shift, "--n", "2"]);
    assert_eq!(code(&o), 0);
    assert_eq!(stdout(&o), "{e.f, e.g, f.e, g.f, g.g}\n");

    let o = run(&["blocks", "--shift", &shift, "--n", "2", "--format", "lines"]);
    assert_eq!(stdout(&o), "block\te.f\nblock\te.g\nblock\tf.e\nblock\tg.f\nblock\tg.g\npartial\tfalse\n");
}

#[test]
fn presentation_file_resolves_graph_relative_to_itself() {
    let o = run(&["blocks", "--shift", &fixture("g1.shift"), "--n", "1"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "{e, f, g}\n");
}

#[test]
fn membership_answers() {
    let o = run(&["member", "--shift", "builtin:ex5_18_pairs", "--seq", "a1|(a2)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "Yes\n"));
    let o = run(&["member", "--shift", "builtin:first_or_equal", "--seq", "(a1.a2)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "No\n"));
    let o = run(&["member", "--shift", "builtin:first_or_equal", "--seq", "a1"]);
    assert_eq!(stdout(&o), "Yes\n");
}

#[test]
fn seq_round_trips_through_lines_output() {
    for s in ["~", "a1.a2", "(a1.a2)", "a1|(a2)", "a3.a3|(a3)"] {
        let o = run(&["member", "--shift", "builtin:full", "--seq", s, "--format", "lines"]);
        let printed = stdout(&o);
        let fields: Vec<&str> = printed.trim_end().split('\t').collect();
        assert_eq!(fields[0], "member");
        let again = run(&["member", "--shift", "builtin:full", "--seq", fields[1], "--format", "lines"]);
        assert_eq!(stdout(&again), printed);
    }
}

#[test]
fn classification() {
    let o = run(&["classify", "--shift", &fixture("two_step.shift")]);
    assert_eq!(stdout(&o), "FiniteSymbol\n");
    let o = run(&["classify", "--shift", "builtin:first_or_equal"]);
    assert_eq!(stdout(&o), "NotRowFinite\n");
    let o = run(&["classify", "--shift", &format!("edges:{}", fixture("h.graph"))]);
    assert_eq!(stdout(&o), "NotRowFinite\n");
}

#[test]
fn higher_block_parts_match_fixtures() {
    let shift = format!("edges:{}", fixture("g1.graph"));
    let target = run(&["higher-block", "--shift", &shift, "--n", "2", "--emit", "target"]);
    assert_eq!(stdout(&target), std::fs::read_to_string(fixture("g1_hb2.graph")).unwrap());
    let forward = run(&["higher-block", "--shift", &shift, "--n", "2", "--emit", "forward"]);
    assert_eq!(stdout(&forward), std::fs::read_to_string(fixture("phi2.blockmap")).unwrap());
    let backward = run(&["higher-block", "--shift", &shift, "--n", "2", "--emit", "backward"]);
    assert_eq!(stdout(&backward), std::fs::read_to_string(fixture("pi2.blockmap")).unwrap());
}

#[test]
fn blockmap_round_trips_through_compose_with_identity() {
    let dir = tempfile::tempdir().unwrap();
    let id = dir.path().join("id.blockmap");
    std::fs::write(&id, "blockmap id window 1\ndefault coordinate 1\n").unwrap();
    let o = run(&["compose", "--phi", &fixture("xor.blockmap"), "--psi", id.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let original = std::fs::read_to_string(fixture("xor.blockmap")).unwrap();
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("blockmap xor_then_id window 2"));
    assert!(text.lines().skip(1).eq(original.lines().skip(1)));
}

#[test]
fn composed_window_and_table() {
    let o = run(&["compose", "--phi", &fixture("xor.blockmap"), "--psi", &fixture("xor.blockmap")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("blockmap xor_then_xor window 3\n"), "{text}");
    // xor of neighbouring xors is the xor of the outer pair
    assert!(text.contains("map a1.a2.a1 a1\n"));
    assert!(text.contains("map a1.a1.a2 a2\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("map ")).count(), 8);
}

#[test]
fn recode_to_one_block() {
    let o = run(&["recode", "--shift", &fixture("two_step.shift"), "--code", &fixture("xor.blockmap")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(
        stdout(&o),
        "blockmap xor_1block window 1\nmap <a1,a1> a1\nmap <a1,a2> a2\nmap <a2,a1> a2\nmap <a2,a2> a1\n"
    );
}

#[test]
fn conjugacy_verified_and_refuted() {
    let source = fixture("g1.shift");
    let target = format!("edges:{}", fixture("g1_hb2.graph"));
    let ok = run(&[
        "verify-conjugacy", "--source", &source, "--target", &target,
        "--forward", &fixture("phi2.blockmap"), "--backward", &fixture("pi2.blockmap"), "--depth", "3",
    ]);
    assert_eq!(code(&ok), 0, "{}", stderr(&ok));
    assert!(stdout(&ok).starts_with("VerifiedToDepth: 3 "));

    let bad = run(&[
        "verify-conjugacy", "--source", &source, "--target", &target,
        "--forward", &fixture("phi2.blockmap"), "--backward", &fixture("phi2.blockmap"),
    ]);
    assert_eq!(code(&bad), 1);
    assert!(stdout(&bad).starts_with("Refuted: "));
}

#[test]
fn ck_image_of_the_higher_block_map() {
    let o = run(&[
        "ck-image", "--E", &fixture("g1.graph"), "--F", &fixture("g1_hb2.graph"),
        "--phi", &fixture("phi2.blockmap"), "--verify", "--surjectivity",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.contains("s_e: 1 * <e,f> ; @f + 1 * <e,g> ; @g\n"), "{text}");
    assert!(text.contains("Valid: projections=2 orthogonal_pairs=1 ck1=3 ck2=2\n"), "{text}");
    assert_eq!(text.matches(": recovered ").count(), 5);
}

#[test]
fn ck_image_failure_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.blockmap");
    std::fs::write(
        &bad,
        "blockmap bad window 2\nmap e.f <e,f>\nmap e.g <e,f>\nmap f.e <f,e>\nmap g.f <g,f>\nmap g.g <g,g>\n",
    )
    .unwrap();
    let o = run(&[
        "ck-image", "--E", &fixture("g1.graph"), "--F", &fixture("g1_hb2.graph"),
        "--phi", bad.to_str().unwrap(), "--verify",
    ]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).contains("FailedRelation: CK1 "));
}

#[test]
fn groupoid_operations() {
    let g1 = fixture("g1.graph");
    let o = run(&["groupoid", "--graph", &g1, "--op", "compose", "--a", "e|(f.e);1;(f.e)", "--b", "(f.e);-1;g|(f.e)"]);
    assert_eq!((code(&o), stdout(&o).as_str()), (0, "element: (e.f);0;g|(f.e)\n"));

    let o = run(&["groupoid", "--graph", &g1, "--op", "inverse", "--a", "e|(f.e);1;(f.e)"]);
    assert_eq!(stdout(&o), "element: (f.e);-1;(e.f)\n");

    let o = run(&["groupoid", "--graph", &g1, "--op", "compose", "--a", "(e.f);0;(e.f)", "--b", "(f.e);0;(f.e)"]);
    assert_eq!(code(&o), 1);
    assert!(stdout(&o).starts_with("NotComposable: "));

    let o = run(&["groupoid", "--graph", &fixture("h.graph"), "--op", "unit", "--point", "@w"]);
    assert_eq!(stdout(&o), "element: @w;0;@w\n");

    let o = run(&[
        "groupoid", "--graph", &g1, "--op", "map", "--a", "e|(f.e);1;(f.e)",
        "--forward", &fixture("phi2.blockmap"), "--backward", &fixture("pi2.blockmap"),
        "--target", &fixture("g1_hb2.graph"),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    assert_eq!(stdout(&o), "element: (<e,f>.<f,e>);1;(<f,e>.<e,f>)\n");

    let o = run(&["groupoid", "--graph", &g1, "--op", "inverse", "--a", "(e.f);3;(e.f)"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn metrics() {
    let o = run(&["metric", "--kind", "d", "--x", "(a1)", "--y", "a1|(a2)"]);
    assert_eq!(stdout(&o), "1/2^2\n");
    let o = run(&["metric", "--kind", "da", "--x", "(a1)", "--y", "(a1)"]);
    assert_eq!(stdout(&o), "0\n");
    let o = run(&["metric", "--kind", "d", "--x", "a1", "--y", "(a1)"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn unknown_flags_are_errors() {
    let o = run(&["blocks", "--shift", "builtin:full", "--n", "1", "--verbose"]);
    assert_eq!(code(&o), 2);
    let o = run(&["frobnicate"]);
    assert_eq!(code(&o), 2);
}

#[test]
fn input_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("bad.graph");
    std::fs::write(&graph, "graph X\nvertex u\n\nedge e u q\n").unwrap();
    let o = run(&["blocks", "--shift", &format!("edges:{}", graph.display()), "--n", "1"]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 4: unknown vertex `q`"), "{}", stderr(&o));

    let code_file = dir.path().join("bad.blockmap");
    std::fs::write(&code_file, "blockmap b window 2\nmap a1 a2\n").unwrap();
    let o = run(&["compose", "--phi", code_file.to_str().unwrap(), "--psi", code_file.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2:"), "{}", stderr(&o));

    let shift = dir.path().join("bad.shift");
    std::fs::write(&shift, "shift forbidden finite:2\nblock a1.a3\n").unwrap();
    let o = run(&["classify", "--shift", shift.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 2:"), "{}", stderr(&o));

    let o = run(&["member", "--shift", "builtin:nope", "--seq", "a1"]);
    assert_eq!(code(&o), 2);
}
