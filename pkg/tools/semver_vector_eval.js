// Evaluates candidate semver cases through the real node-semver package and
// prints the verdicts as JSON. Driven by generate_semver_vectors.py.
//
// stdin:  {"parse": ["1.2.3", ...],
//          "compare": [["a","b"], ...],
//          "satisfies": [["version","range"], ...],
//          "range_parse": ["^1.2.3", ...]}
// stdout: same sections with node-semver's answers attached.

const semver = require("semver");

let input = "";
process.stdin.on("data", (chunk) => (input += chunk));
process.stdin.on("end", () => {
  const cases = JSON.parse(input);
  const out = {
    semver_version: require("semver/package.json").version,
    parse: [],
    compare: [],
    satisfies: [],
    range_parse: [],
  };

  for (const text of cases.parse) {
    const parsed = semver.parse(text);
    if (parsed === null) {
      out.parse.push({ input: text, valid: false });
    } else {
      out.parse.push({
        input: text,
        valid: true,
        major: parsed.major,
        minor: parsed.minor,
        patch: parsed.patch,
        prerelease: parsed.prerelease,
        build: parsed.build,
      });
    }
  }

  for (const [a, b] of cases.compare) {
    out.compare.push({ a, b, result: semver.compare(a, b) });
  }

  for (const [version, range] of cases.satisfies) {
    out.satisfies.push({
      version,
      range,
      result: semver.satisfies(version, range),
    });
  }

  for (const range of cases.range_parse) {
    out.range_parse.push({
      range,
      valid: semver.validRange(range) !== null,
    });
  }

  process.stdout.write(JSON.stringify(out, null, 1));
});
