/** Manager dashboard: score trend (line with visible gaps), response-rate
 * bars, open flag cards, member table with latest scores and kudos tallies.
 * Range changes re-query; stale responses are dropped by sequence. */

import type { ApiClient, Dashboard, Profile, SeriesPoint } from "./api";
import { LatestWins } from "./api";
import { button, clear, el, labeled, statusLine, textInput } from "./dom";

const CHART_W = 560;
const CHART_H = 160;

/** Line segments between consecutive non-null points; null weeks break the
 * line so absence stays visible instead of interpolated away. */
export function trendSegments(series: SeriesPoint[]): Array<Array<{ x: number; y: number }>> {
  const n = series.length;
  if (n === 0) return [];
  const stepX = n === 1 ? 0 : CHART_W / (n - 1);
  const segments: Array<Array<{ x: number; y: number }>> = [];
  let current: Array<{ x: number; y: number }> = [];
  series.forEach((point, i) => {
    if (point.score === null) {
      if (current.length) segments.push(current);
      current = [];
      return;
    }
    const score = Number(point.score);
    const y = CHART_H - ((score - 1) / 4) * CHART_H; // scores live in [1, 5]
    current.push({ x: i * stepX, y });
  });
  if (current.length) segments.push(current);
  return segments;
}

function svgEl(tag: string, attrs: Record<string, string>): SVGElement {
  const node = document.createElementNS("http://www.w3.org/2000/svg", tag);
  for (const [k, v] of Object.entries(attrs)) node.setAttribute(k, v);
  return node;
}

export function renderTrend(series: SeriesPoint[]): SVGElement {
  const svg = svgEl("svg", {
    viewBox: `0 0 ${CHART_W} ${CHART_H}`,
    role: "img",
    "aria-label": `Score trend across ${series.length} weeks`,
    class: "trend",
  });
  for (const segment of trendSegments(series)) {
    const only = segment[0];
    if (segment.length === 1 && only !== undefined) {
      svg.append(svgEl("circle", { cx: String(only.x), cy: String(only.y), r: "3" }));
      continue;
    }
    const d = segment
      .map((p, i) => `${i === 0 ? "M" : "L"}${p.x.toFixed(1)},${p.y.toFixed(1)}`)
      .join(" ");
    svg.append(svgEl("path", { d, fill: "none", "stroke-width": "2" }));
  }
  return svg;
}

export function renderRateBars(series: SeriesPoint[]): HTMLElement {
  const wrap = el("div", { class: "rate-bars", role: "img", "aria-label": "Response rate by week" });
  for (const point of series) {
    const rate = Number(point.response_rate);
    const bar = el("div", {
      class: "rate-bar",
      title: `${point.period}: ${point.response_rate}`,
    });
    bar.style.height = `${Math.round(rate * 100)}%`;
    wrap.append(bar);
  }
  return wrap;
}

export interface DashboardViewOptions {
  api: ApiClient;
  groupId: string;
  initialRange?: { from: string; to: string };
}

export function createDashboardView(options: DashboardViewOptions): HTMLElement {
  const { api, groupId } = options;
  const root = el("section", { class: "dashboard", "aria-label": "Group dashboard" });
  const content = el("div", { class: "dashboard-body" });
  const problem = el("div", { class: "problem-slot" });
  const latest = new LatestWins<Dashboard>();

  const fromInput = textInput({ value: options.initialRange?.from ?? "", placeholder: "2026-W20" });
  const toInput = textInput({ value: options.initialRange?.to ?? "", placeholder: "2026-W31" });
  const rangeForm = el(
    "form",
    { class: "range-picker" },
    el("label", {}, "From week ", fromInput),
    el("label", {}, "To week ", toInput),
    button(
      "Apply range",
      () => {
        void load();
      },
      { class: "cta" },
    ),
  );
  rangeForm.addEventListener("submit", (ev) => ev.preventDefault());

  function renderDashboard(data: Dashboard): void {
    clear(content);
    content.append(el("h2", {}, `${data.group.name}: ${data.range.from} to ${data.range.to}`));
    content.append(el("h3", {}, "Score trend"), renderTrend(data.series));
    content.append(el("h3", {}, "Response rate"), renderRateBars(data.series));

    content.append(el("h3", {}, "Open flags"));
    if (data.flags.length === 0) {
      content.append(el("p", { class: "empty" }, "No flags in this range."));
    } else {
      const flagList = el("ul", { class: "flags" });
      for (const f of data.flags) {
        flagList.append(
          el(
            "li",
            { class: `flag flag-${f.severity.toLowerCase()}` },
            el("strong", {}, `${f.rule} (${f.severity})`),
            el("span", {}, ` ${f.period_end} — ${f.details}`),
          ),
        );
      }
      content.append(flagList);
    }

    content.append(el("h3", {}, "Members"));
    const table = el("table", {});
    table.append(
      el(
        "thead",
        {},
        el(
          "tr",
          {},
          el("th", { scope: "col" }, "Member"),
          el("th", { scope: "col" }, "Latest score"),
          el("th", { scope: "col" }, "Kudos sent"),
          el("th", { scope: "col" }, "Kudos received"),
        ),
      ),
    );
    const tbody = el("tbody", {});
    for (const m of data.members) {
      tbody.append(
        el(
          "tr",
          {},
          el("td", {}, m.display_name),
          el("td", {}, m.latest ? `${m.latest.score} (${m.latest.period})` : "—"),
          el("td", {}, String(m.kudos.sent)),
          el("td", {}, String(m.kudos.received)),
        ),
      );
    }
    table.append(tbody);
    content.append(table);
  }

  async function load(): Promise<void> {
    clear(problem);
    const from = fromInput.value.trim();
    const to = toInput.value.trim();
    const range = from && to ? { from, to } : undefined;
    try {
      const data = await latest.run(() => api.dashboard(groupId, range));
      if (data !== null) renderDashboard(data); // null = a newer query superseded this one
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      problem.append(statusLine("error", message));
    }
  }

  root.append(rangeForm, problem, content);
  void load();
  return root;
}

/** Route wrapper: pick a group, then mount the dashboard for it. Admins get
 * a select fed by the directory; managers paste the group id they own (the
 * API exposes no directory to them). */
export function createDashboardRoute(api: ApiClient, profile: Profile): HTMLElement {
  const root = el("section", { "aria-label": "Dashboard" });
  const mount = el("div", { class: "dashboard-mount" });
  const problem = el("div", { class: "problem-slot" });

  function open(groupId: string): void {
    clear(problem);
    if (groupId.trim() === "") {
      problem.append(statusLine("error", "Pick a group first."));
      return;
    }
    clear(mount);
    mount.append(createDashboardView({ api, groupId: groupId.trim() }));
  }

  const picker = el("form", { class: "group-picker" });
  if (profile.role === "admin") {
    const groupSelect = el("select", {});
    picker.append(
      labeled("Group", groupSelect),
      button("Open dashboard", () => open(groupSelect.value), { class: "cta" }),
    );
    void api.listGroups().then(
      (page) => {
        for (const g of page.items.filter((g) => !g.archived)) {
          groupSelect.append(el("option", { value: g.id }, g.name));
        }
      },
      (err: unknown) => {
        const message = err instanceof Error ? err.message : String(err);
        problem.append(statusLine("error", message));
      },
    );
  } else {
    const idInput = textInput({ placeholder: "group id" });
    picker.append(
      labeled("Group id", idInput),
      button("Open dashboard", () => open(idInput.value), { class: "cta" }),
    );
  }
  picker.addEventListener("submit", (ev) => ev.preventDefault());

  root.append(el("h2", {}, "Dashboard"), picker, problem, mount);
  return root;
}
