/** Shared fixtures and a stubbed ApiClient for view tests. */

import { vi } from "vitest";
import type {
  ApiClient,
  CurrentForm,
  Dashboard,
  Profile,
  Question,
  Submission,
  Template,
} from "../src/api";

/** Drain pending promise callbacks so views finish their initial load. */
export async function flush(): Promise<void> {
  for (let i = 0; i < 8; i++) await Promise.resolve();
  await new Promise((resolve) => setTimeout(resolve, 0));
}

export function profileOf(role: Profile["role"], name = "Alex Reyes"): Profile {
  return {
    id: `00000000-0000-4000-8000-00000000000${role.length}`,
    email: `${role}@example.com`,
    display_name: name,
    role,
    active: true,
    created_at: "2026-08-10T09:00:00Z",
  };
}

export function question(id: string, prompt: string, kind: Question["kind"], required = true): Question {
  return { id, prompt, kind, required };
}

export const TEMPLATE: Template = {
  id: "t-1",
  title: "Weekly Pulse",
  status: "active",
  questions: [
    question("q-mood", "How was your week overall?", "likert5"),
    question("q-load", "How manageable was your workload?", "likert5"),
    question("q-note", "Anything else to share?", "free_text", false),
  ],
};

export function submissionOf(answers: Submission["answers"], revision = 1): Submission {
  return {
    id: "s-1",
    user_id: profileOf("employee").id,
    template_id: TEMPLATE.id,
    period: "2026-W33",
    revision,
    submitted_at: "2026-08-12T09:00:00Z",
    answers,
  };
}

export function formOf(submission: Submission | null = null): CurrentForm {
  return { period: "2026-W33", template: TEMPLATE, submission };
}

export const DASHBOARD: Dashboard = {
  group: { id: "g-1", name: "Platform" },
  range: { from: "2026-W30", to: "2026-W33" },
  series: [
    { period: "2026-W30", score: "4.00", response_rate: "1.00" },
    { period: "2026-W31", score: null, response_rate: "0.00" },
    { period: "2026-W32", score: "3.50", response_rate: "0.50" },
    { period: "2026-W33", score: "3.00", response_rate: "1.00" },
  ],
  members: [
    {
      user_id: "u-eve",
      display_name: "Eve Castillo",
      latest: { period: "2026-W33", score: "3.00" },
      kudos: { sent: 2, received: 1 },
    },
    {
      user_id: "u-omar",
      display_name: "Omar Haddad",
      latest: null,
      kudos: { sent: 0, received: 0 },
    },
  ],
  flags: [
    {
      rule: "LOW_WEEK",
      subject_kind: "user",
      subject_id: "u-eve",
      period_end: "2026-W33",
      severity: "High",
      details: "score 1.50 at or below 2.00",
    },
  ],
};

type Stubbed = { [K in keyof ApiClient]: ApiClient[K] };

/** Every method rejects until a test installs behavior. */
export function stubApi(overrides: Partial<Stubbed> = {}): ApiClient {
  const reject = () => vi.fn().mockRejectedValue(new Error("not stubbed"));
  const base: Record<string, unknown> = {
    setToken: vi.fn(),
    hasToken: vi.fn().mockReturnValue(true),
    login: reject(),
    logout: vi.fn().mockResolvedValue(undefined),
    me: reject(),
    currentForm: reject(),
    submitCheckin: reject(),
    listCheckins: reject(),
    getCheckin: reject(),
    listComments: vi.fn().mockResolvedValue({ items: [] }),
    postComment: reject(),
    kudosFeed: reject(),
    sendKudos: reject(),
    dashboard: reject(),
    flags: reject(),
    listGroups: vi.fn().mockResolvedValue({ items: [] }),
    createGroup: reject(),
    editGroup: reject(),
    listTemplates: vi.fn().mockResolvedValue({ items: [] }),
    createTemplate: reject(),
    assignTemplate: reject(),
    listSchedules: vi.fn().mockResolvedValue({ items: [] }),
    createSchedule: reject(),
    editSchedule: reject(),
  };
  return { ...base, ...overrides } as unknown as ApiClient;
}

/** Focusable elements in DOM order; with no positive tabindex anywhere,
 * DOM order is the tab order. */
export function tabOrder(root: ParentNode): HTMLElement[] {
  const nodes = root.querySelectorAll<HTMLElement>(
    "a[href], button, input, select, textarea, [tabindex]",
  );
  return Array.from(nodes).filter((n) => {
    if (n.closest("[hidden]")) return false;
    if (n.getAttribute("disabled") !== null) return false;
    return true;
  });
}

/** What assistive tech would announce; empty string means unnamed. */
export function accessibleName(node: HTMLElement): string {
  const ariaLabel = node.getAttribute("aria-label");
  if (ariaLabel && ariaLabel.trim()) return ariaLabel.trim();
  const labelledBy = node.getAttribute("aria-labelledby");
  if (labelledBy) {
    const parts = labelledBy
      .split(/\s+/)
      .map((id) => node.ownerDocument.getElementById(id)?.textContent ?? "")
      .join(" ")
      .trim();
    if (parts) return parts;
  }
  const id = node.getAttribute("id");
  if (id) {
    const label = node.ownerDocument.querySelector(`label[for="${id}"]`);
    if (label?.textContent?.trim()) return label.textContent.trim();
  }
  const wrapping = node.closest("label");
  if (wrapping?.textContent?.trim()) return wrapping.textContent.trim();
  if (node.matches("button, a, [role]")) {
    const text = node.textContent?.trim() ?? "";
    if (text) return text;
  }
  return "";
}

export function unnamedInteractive(root: ParentNode): HTMLElement[] {
  return tabOrder(root).filter((n) => accessibleName(n) === "");
}
