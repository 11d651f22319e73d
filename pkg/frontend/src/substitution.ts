/**
 * ASCII-to-Unicode substitution, sharing the table published by the
 * compiler (public/substitutions.json). Semantics mirror the compiler's
 * substitute_ascii: longest trigger first, backtick spans untouched.
 *
 * The editor variant fires as the user types. A trigger that is a proper
 * prefix of a longer trigger (\in inside \int) is deferred one keystroke
 * so the longer spelling stays reachable.
 */

export interface SubstitutionTable {
  version: number;
  entries: Record<string, string>;
}

export function orderedTriggers(table: SubstitutionTable): string[] {
  return Object.keys(table.entries).sort((a, b) => b.length - a.length);
}

function insideBackticks(text: string, index: number): boolean {
  let ticks = 0;
  for (let i = 0; i < index; i++) {
    if (text[i] === "`") ticks++;
  }
  return ticks % 2 === 1;
}

/** Whole-text substitution, identical to the compiler's pass. */
export function applySubstitutions(text: string, table: SubstitutionTable): string {
  const triggers = orderedTriggers(table);
  let out = "";
  let i = 0;
  let inTicks = false;
  while (i < text.length) {
    const ch = text[i];
    if (ch === "`") {
      inTicks = !inTicks;
      out += ch;
      i += 1;
      continue;
    }
    if (!inTicks) {
      const hit = triggers.find((t) => text.startsWith(t, i));
      if (hit !== undefined) {
        out += table.entries[hit];
        i += hit.length;
        continue;
      }
    }
    out += ch;
    i += 1;
  }
  return out;
}

export interface CursorEdit {
  text: string;
  cursor: number;
}

function isProperPrefixOfAnother(trigger: string, triggers: string[]): boolean {
  return triggers.some((t) => t.length > trigger.length && t.startsWith(trigger));
}

/**
 * Substitution at the cursor after an insertion. Returns the edited
 * buffer, or null when nothing fires. Deferred triggers (a proper prefix
 * of a longer one) replace retroactively once the next character proves
 * the longer trigger is not being typed.
 */
export function substituteAtCursor(
  text: string,
  cursor: number,
  table: SubstitutionTable,
): CursorEdit | null {
  const triggers = orderedTriggers(table);
  const head = text.slice(0, cursor);

  const ending = triggers.find((t) => head.endsWith(t));
  if (ending !== undefined) {
    const start = cursor - ending.length;
    if (insideBackticks(text, start)) return null;
    if (isProperPrefixOfAnother(ending, triggers)) return null; // defer
    const replacement = table.entries[ending];
    return {
      text: text.slice(0, start) + replacement + text.slice(cursor),
      cursor: start + replacement.length,
    };
  }

  // the just-typed character may have closed off a deferred trigger
  if (cursor >= 2) {
    const beforeLast = head.slice(0, -1);
    const deferred = triggers.find(
      (t) => beforeLast.endsWith(t) && isProperPrefixOfAnother(t, triggers),
    );
    if (deferred !== undefined) {
      const start = cursor - 1 - deferred.length;
      if (insideBackticks(text, start)) return null;
      const replacement = table.entries[deferred];
      return {
        text: text.slice(0, start) + replacement + text.slice(cursor - 1),
        cursor: start + replacement.length + 1,
      };
    }
  }
  return null;
}
