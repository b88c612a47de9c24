/** Color tokens and the WCAG relative-luminance contrast math.
 *
 * Every foreground/background pair in TOKENS must reach 7.0 (enhanced level
 * for normal text); the primary CTA pair must reach 7.6. The test suite
 * recomputes every ratio, so darkening a background here is safe and
 * lightening one is caught.
 */

export interface ColorPair {
  readonly name: string;
  readonly foreground: string;
  readonly background: string;
}

export interface ThemeTokens {
  readonly text: ColorPair;
  readonly mutedText: ColorPair;
  readonly surfaceText: ColorPair;
  readonly surfaceMuted: ColorPair;
  readonly cta: ColorPair;
  readonly link: ColorPair;
  readonly inverse: ColorPair;
  readonly danger: ColorPair;
  readonly success: ColorPair;
  readonly warning: ColorPair;
}

export const TOKENS: ThemeTokens = {
  text: { name: "text", foreground: "#1F2933", background: "#FFFFFF" },
  mutedText: { name: "mutedText", foreground: "#3E4C59", background: "#FFFFFF" },
  surfaceText: { name: "surfaceText", foreground: "#1F2933", background: "#F5F7FA" },
  surfaceMuted: { name: "surfaceMuted", foreground: "#3E4C59", background: "#F5F7FA" },
  // #155A8A only reaches 7.34:1 against white; darkened until the computed
  // ratio clears 7.6 with margin.
  cta: { name: "cta", foreground: "#FFFFFF", background: "#145380" },
  link: { name: "link", foreground: "#124E78", background: "#FFFFFF" },
  inverse: { name: "inverse", foreground: "#F5F7FA", background: "#1F2933" },
  danger: { name: "danger", foreground: "#6E1B1B", background: "#FCEBE8" },
  success: { name: "success", foreground: "#14532D", background: "#E8F5EE" },
  warning: { name: "warning", foreground: "#5F370E", background: "#FDF3E1" },
};

export function allPairs(tokens: ThemeTokens = TOKENS): ColorPair[] {
  return Object.values(tokens);
}

function channel(value: number): number {
  const v = value / 255;
  return v <= 0.03928 ? v / 12.92 : Math.pow((v + 0.055) / 1.055, 2.4);
}

export function relativeLuminance(hex: string): number {
  const m = /^#([0-9a-fA-F]{6})$/.exec(hex);
  if (!m || m[1] === undefined) throw new Error(`not a #RRGGBB color: ${hex}`);
  const n = parseInt(m[1], 16);
  const r = channel((n >> 16) & 0xff);
  const g = channel((n >> 8) & 0xff);
  const b = channel(n & 0xff);
  return 0.2126 * r + 0.7152 * g + 0.0722 * b;
}

export function contrastRatio(a: string, b: string): number {
  const la = relativeLuminance(a);
  const lb = relativeLuminance(b);
  const [hi, lo] = la >= lb ? [la, lb] : [lb, la];
  return (hi + 0.05) / (lo + 0.05);
}

/** Inline style variables so views never hardcode colors. */
export function cssVariables(tokens: ThemeTokens = TOKENS): string {
  return allPairs(tokens)
    .map((p) => `--${p.name}-fg: ${p.foreground}; --${p.name}-bg: ${p.background};`)
    .join(" ");
}
