import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { SchemeDescriptor, TokenizeResponse } from "../src/types.js";

const here = fileURLToPath(new URL(".", import.meta.url));

export function loadFixture(name: string): TokenizeResponse {
  const path = join(here, "fixtures", `${name}.json`);
  return JSON.parse(readFileSync(path, "utf8")) as TokenizeResponse;
}

export function loadDescriptors(): SchemeDescriptor[] {
  const path = join(here, "fixtures", "tokenizers.json");
  return JSON.parse(readFileSync(path, "utf8")) as SchemeDescriptor[];
}
