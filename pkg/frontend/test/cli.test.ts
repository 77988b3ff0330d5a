import { existsSync, mkdtempSync } from "node:fs";
import { tmpdir } from "node:os";
import { join, resolve } from "node:path";

import { describe, expect, it } from "vitest";

import { main } from "../src/cli.js";

const fixture = (name: string) => resolve(__dirname, "fixtures", name);

describe("cli", () => {
  it("renders a figure and exits 0", () => {
    const out = join(mkdtempSync(join(tmpdir(), "invsq-cli-")), "beta.svg");
    expect(main(["beta", "--in", fixture("beta.csv"), "--out", out])).toBe(0);
    expect(existsSync(out)).toBe(true);
  });

  it("exits 1 on unknown kind or missing arguments", () => {
    expect(main(["wiggle", "--in", fixture("beta.csv"), "--out", "/tmp/x.svg"])).toBe(1);
    expect(main(["beta"])).toBe(1);
  });

  it("exits 1 when the table does not match the declared kind", () => {
    const out = join(mkdtempSync(join(tmpdir(), "invsq-cli-")), "bad.svg");
    expect(main(["rgflow", "--in", fixture("beta.csv"), "--out", out])).toBe(1);
    expect(existsSync(out)).toBe(false);
  });

  it("exits 2 on unreadable input", () => {
    expect(main(["beta", "--in", "/nonexistent.csv", "--out", "/tmp/x.svg"])).toBe(2);
  });
});
