/** Token stream panel: wrapped chips for simple schemes, a fixed-width
 *  grid for compound ones. Labels are pure; DOM assembly is at the end. */

import { CompoundToken, isCompound, SimpleToken, Token, TokenCell } from "./types.js";

export function tokenLabel(token: SimpleToken): string {
  return `${token.type}_${token.value}`;
}

export function cellLabel(cell: TokenCell): string {
  return `${cell.type}_${cell.value}`;
}

/** Rows for the compound grid; each row is one token's cells in order. */
export function compoundRows(tokens: Token[]): TokenCell[][] {
  return tokens.filter(isCompound).map((token: CompoundToken) => token.cells);
}

export interface TokenPanelHooks {
  onTokenClick: (tokenIndex: number) => void;
}

export function renderTokenPanel(
  container: HTMLElement,
  tokens: Token[],
  compoundWidth: number,
  highlighted: ReadonlySet<number>,
  hooks: TokenPanelHooks,
): void {
  container.textContent = "";
  if (tokens.length === 0) {
    return;
  }
  if (compoundWidth === 0) {
    const list = document.createElement("div");
    list.className = "chip-row";
    for (const token of tokens) {
      if (isCompound(token)) continue;
      const chip = document.createElement("button");
      chip.type = "button";
      chip.className = "chip";
      chip.textContent = tokenLabel(token);
      chip.dataset.index = String(token.index);
      if (highlighted.has(token.index)) chip.classList.add("highlight");
      if (token.noteId === null) chip.classList.add("structural");
      chip.addEventListener("click", () => hooks.onTokenClick(token.index));
      list.appendChild(chip);
    }
    container.appendChild(list);
    return;
  }
  const grid = document.createElement("div");
  grid.className = "compound-grid";
  grid.style.gridTemplateColumns = `repeat(${compoundWidth}, minmax(0, 1fr))`;
  for (const token of tokens) {
    if (!isCompound(token)) continue;
    for (const cell of token.cells) {
      const el = document.createElement("button");
      el.type = "button";
      el.className = "chip cell";
      el.textContent = cellLabel(cell);
      el.dataset.index = String(token.index);
      if (highlighted.has(token.index)) el.classList.add("highlight");
      if (token.noteId === null) el.classList.add("structural");
      el.addEventListener("click", () => hooks.onTokenClick(token.index));
      grid.appendChild(el);
    }
  }
  container.appendChild(grid);
}

/** Bring the first highlighted chip into view after a note click. */
export function scrollToHighlight(container: HTMLElement): void {
  const chip = container.querySelector<HTMLElement>(".chip.highlight");
  chip?.scrollIntoView({ block: "nearest", behavior: "smooth" });
}
