/** Typed client for the /api/v1 contract. The only module that talks to the
 * network; every error becomes a parsed envelope, never a thrown string. */

declare const __API_BASE__: string | undefined;

export const API_BASE: string =
  typeof __API_BASE__ === "string" ? __API_BASE__ : "/api/v1";

export type ErrorCode =
  | "UNAUTHENTICATED"
  | "FORBIDDEN"
  | "NOT_FOUND"
  | "VALIDATION"
  | "CONFLICT"
  | "WINDOW_CLOSED"
  | "INTERNAL";

export interface ErrorEnvelope {
  code: ErrorCode;
  message: string;
  details?: Array<Record<string, string>>;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly envelope: ErrorEnvelope,
  ) {
    super(envelope.message);
  }
}

export interface Profile {
  id: string;
  email: string;
  display_name: string;
  role: "employee" | "manager" | "admin";
  active: boolean;
  created_at: string;
}

export interface Question {
  id: string;
  prompt: string;
  kind: "likert5" | "free_text";
  required: boolean;
}

export interface Template {
  id: string;
  title: string;
  status: string;
  questions: Question[];
}

export interface AnswerOut {
  question_id: string;
  value: number | string;
}

export interface Submission {
  id: string;
  user_id: string;
  template_id: string;
  period: string;
  revision: number;
  submitted_at: string;
  answers: AnswerOut[];
}

export interface CurrentForm {
  period: string;
  template: Template;
  submission: Submission | null;
}

export interface Comment {
  id: string;
  submission_id: string;
  author_id: string;
  question_id: string | null;
  body: string;
  created_at: string;
}

export interface Kudos {
  id: string;
  from_user_id: string;
  to_user_id: string;
  message: string;
  created_at: string;
}

/** Only GET /checkins paginates; every other list returns bare items. */
export interface Page<T> {
  items: T[];
  page: number;
  page_size: number;
  total_count: number;
}

export interface Listing<T> {
  items: T[];
}

export interface SeriesPoint {
  period: string;
  score: string | null;
  response_rate: string;
}

export interface MemberRow {
  user_id: string;
  display_name: string;
  latest: { period: string; score: string } | null;
  kudos: { sent: number; received: number };
}

export interface FlagRow {
  id?: string; // present from /flags, absent inside a dashboard payload
  rule: string;
  subject_kind: string;
  subject_id: string;
  period_end: string;
  severity: string;
  details: string;
}

export interface Dashboard {
  group: { id: string; name: string };
  range: { from: string; to: string };
  series: SeriesPoint[];
  members: MemberRow[];
  flags: FlagRow[];
}

export interface GroupCore {
  id: string;
  name: string;
  archived: boolean;
}

/** The admin list adds membership; create/patch return only the core. */
export interface GroupSummary extends GroupCore {
  members: string[];
  managers: string[];
}

export interface Schedule {
  id: string;
  group_id: string;
  template_id: string;
  weekday: string;
  time_of_day: string;
  timezone: string;
  enabled: boolean;
}

function isEnvelope(body: unknown): body is ErrorEnvelope {
  return (
    typeof body === "object" &&
    body !== null &&
    typeof (body as ErrorEnvelope).code === "string" &&
    typeof (body as ErrorEnvelope).message === "string"
  );
}

export class ApiClient {
  private token: string | null = null; // memory only, never persisted

  constructor(private readonly base: string = API_BASE) {}

  setToken(token: string | null): void {
    this.token = token;
  }

  hasToken(): boolean {
    return this.token !== null;
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {};
    if (this.token) headers["Authorization"] = `Bearer ${this.token}`;
    if (body !== undefined) headers["Content-Type"] = "application/json";
    const resp = await fetch(this.base + path, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const text = await resp.text();
    const parsed: unknown = text ? JSON.parse(text) : null;
    if (!resp.ok) {
      if (isEnvelope(parsed)) throw new ApiError(resp.status, parsed);
      throw new ApiError(resp.status, {
        code: "INTERNAL",
        message: `unexpected response (${resp.status})`,
      });
    }
    return parsed as T;
  }

  // --- auth ---
  async login(email: string, password: string, newPassword?: string): Promise<Profile> {
    const body: Record<string, string> = { email, password };
    if (newPassword) body["new_password"] = newPassword;
    const out = await this.request<{ token: string; user: Profile }>(
      "POST",
      "/auth/login",
      body,
    );
    this.token = out.token;
    return out.user;
  }

  async logout(): Promise<void> {
    await this.request<unknown>("POST", "/auth/logout", {});
    this.token = null;
  }

  me(): Promise<Profile> {
    return this.request("GET", "/me");
  }

  // --- check-ins ---
  currentForm(): Promise<CurrentForm> {
    return this.request("GET", "/checkins/current");
  }

  submitCheckin(body: {
    template_id: string;
    period: string;
    answers: AnswerOut[];
  }): Promise<Submission> {
    return this.request("POST", "/checkins", body);
  }

  listCheckins(params: Record<string, string> = {}): Promise<Page<Submission>> {
    return this.request("GET", `/checkins${query(params)}`);
  }

  getCheckin(id: string): Promise<Submission> {
    return this.request("GET", `/checkins/${id}`);
  }

  listComments(submissionId: string): Promise<Listing<Comment>> {
    return this.request("GET", `/checkins/${submissionId}/comments`);
  }

  postComment(submissionId: string, body: string, questionId?: string): Promise<Comment> {
    const payload: Record<string, string> = { body };
    if (questionId) payload["question_id"] = questionId;
    return this.request("POST", `/checkins/${submissionId}/comments`, payload);
  }

  // --- kudos ---
  kudosFeed(params: Record<string, string> = {}): Promise<Listing<Kudos>> {
    return this.request("GET", `/kudos${query(params)}`);
  }

  sendKudos(toUserId: string, message: string): Promise<Kudos> {
    return this.request("POST", "/kudos", { to_user_id: toUserId, message });
  }

  // --- analytics ---
  dashboard(groupId: string, range?: { from: string; to: string }): Promise<Dashboard> {
    const params: Record<string, string> = range ? { from: range.from, to: range.to } : {};
    return this.request("GET", `/groups/${groupId}/dashboard${query(params)}`);
  }

  flags(params: Record<string, string> = {}): Promise<Listing<FlagRow>> {
    return this.request("GET", `/flags${query(params)}`);
  }

  // --- admin ---
  listGroups(): Promise<Listing<GroupSummary>> {
    return this.request("GET", "/admin/groups");
  }

  createGroup(body: {
    name: string;
    member_ids?: string[];
    manager_ids?: string[];
  }): Promise<GroupCore> {
    return this.request("POST", "/admin/groups", body);
  }

  editGroup(id: string, patch: Record<string, unknown>): Promise<GroupCore> {
    return this.request("PATCH", `/admin/groups/${id}`, patch);
  }

  listTemplates(): Promise<Listing<Template>> {
    return this.request("GET", "/admin/templates");
  }

  createTemplate(body: {
    title: string;
    questions: Array<{ prompt: string; kind: string; required?: boolean }>;
  }): Promise<Template> {
    return this.request("POST", "/admin/templates", body);
  }

  assignTemplate(
    templateId: string,
    groupId: string,
    activeFrom: string,
  ): Promise<{ template_id: string; group_id: string; active_from: string }> {
    return this.request("POST", `/admin/templates/${templateId}/assign`, {
      group_id: groupId,
      active_from: activeFrom,
    });
  }

  listSchedules(): Promise<Listing<Schedule>> {
    return this.request("GET", "/admin/schedules");
  }

  createSchedule(body: {
    group_id: string;
    template_id: string;
    weekday: string;
    time_of_day: string;
    timezone: string;
  }): Promise<Schedule> {
    return this.request("POST", "/admin/schedules", body);
  }

  editSchedule(id: string, patch: Record<string, unknown>): Promise<Schedule> {
    return this.request("PATCH", `/admin/schedules/${id}`, patch);
  }
}

function query(params: Record<string, string>): string {
  const entries = Object.entries(params).filter(([, v]) => v !== "");
  if (entries.length === 0) return "";
  const qs = new URLSearchParams(entries);
  return `?${qs.toString()}`;
}

/** Drops out-of-order responses: callers only ever see the newest request's
 * result. Protects dashboards against slow stale range queries. */
export class LatestWins<T> {
  private seq = 0;

  async run(task: () => Promise<T>): Promise<T | null> {
    const ticket = ++this.seq;
    const result = await task();
    return ticket === this.seq ? result : null;
  }
}

/** Collapses concurrent identical submits: while one is in flight, further
 * calls return the same promise instead of issuing a second request. */
export class InFlight<T> {
  private pending: Promise<T> | null = null;

  run(task: () => Promise<T>): Promise<T> {
    if (this.pending) return this.pending;
    const p = task().finally(() => {
      this.pending = null;
    });
    this.pending = p;
    return p;
  }

  busy(): boolean {
    return this.pending !== null;
  }
}
