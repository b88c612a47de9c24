/** Screen-level views outside the big composites: login, the check-in page
 * wrapping the wizard, kudos feed and composer, team submission list and
 * detail, and the flags list. Each returns a detached element the shell
 * mounts; data loads kick off immediately. */

import type { ApiClient, Profile, Submission } from "./api";
import { ApiError } from "./api";
import { createThread } from "./comments";
import { button, clear, el, labeled, statusLine, textInput, textarea } from "./dom";
import { createWizard } from "./wizard";

export const MAX_KUDOS_LEN = 1000;

function messageOf(err: unknown): string {
  return err instanceof Error ? err.message : String(err);
}

export function shortId(id: string): string {
  return id.length > 8 ? `${id.slice(0, 8)}…` : id;
}

// --- login ----------------------------------------------------------------------

export function createLoginView(api: ApiClient, onLogin: (profile: Profile) => void): HTMLElement {
  const root = el("section", { class: "login", "aria-label": "Sign in" });
  const emailInput = textInput({ autocomplete: "username", placeholder: "you@example.com" });
  const passwordInput = textInput({ type: "password", autocomplete: "current-password" });
  const newPasswordInput = textInput({ type: "password", autocomplete: "new-password" });
  const newPasswordField = labeled("New password", newPasswordInput);
  newPasswordField.hidden = true;
  const problem = el("div", { class: "problem-slot" });

  async function submit(): Promise<void> {
    clear(problem);
    try {
      const profile = await api.login(
        emailInput.value.trim(),
        passwordInput.value,
        newPasswordField.hidden ? undefined : newPasswordInput.value,
      );
      onLogin(profile);
    } catch (err) {
      if (err instanceof ApiError && rotationRequired(err)) {
        // first login on a provisioned account: same form, one more field
        newPasswordField.hidden = false;
        newPasswordInput.focus();
        problem.append(statusLine("info", "Choose a new password to finish signing in."));
        return;
      }
      problem.append(statusLine("error", messageOf(err)));
    }
  }

  const form = el(
    "form",
    { class: "login-form" },
    el("h2", {}, "Sign in"),
    labeled("Email", emailInput),
    labeled("Password", passwordInput),
    newPasswordField,
    problem,
    button(
      "Sign in",
      () => {
        void submit();
      },
      { class: "cta" },
    ),
  );
  form.addEventListener("submit", (ev) => {
    ev.preventDefault();
    void submit();
  });
  root.append(form);
  return root;
}

export function rotationRequired(err: ApiError): boolean {
  return (
    err.envelope.code === "VALIDATION" &&
    (err.envelope.details ?? []).some((d) => d["code"] === "PASSWORD_CHANGE_REQUIRED")
  );
}

// --- my check-in ------------------------------------------------------------------

export function createCheckinView(api: ApiClient, profile: Profile): HTMLElement {
  const root = el("section", { "aria-label": "My check-in" });
  root.append(el("h2", {}, "My check-in"));

  void api.currentForm().then(
    (form) => {
      root.append(
        createWizard({
          form,
          submit: (answers) =>
            api.submitCheckin({
              template_id: form.template.id,
              period: form.period,
              answers,
            }),
        }),
      );
      if (form.submission) {
        root.append(
          createThread({
            api,
            submission: form.submission,
            template: form.template,
            names: new Map([[profile.id, profile.display_name]]),
          }),
        );
      }
    },
    (err: unknown) => {
      if (err instanceof ApiError && err.envelope.code === "NOT_FOUND") {
        root.append(statusLine("info", "No active check-in covers the current period."));
        return;
      }
      root.append(statusLine("error", messageOf(err)));
    },
  );
  return root;
}

// --- kudos -----------------------------------------------------------------------

export function createKudosFeedView(api: ApiClient, names?: Map<string, string>): HTMLElement {
  const root = el("section", { "aria-label": "Kudos feed" });
  root.append(el("h2", {}, "Kudos feed"));
  const list = el("ol", { class: "kudos-list" });
  const who = (id: string): string => names?.get(id) ?? shortId(id);

  void api.kudosFeed().then(
    (page) => {
      if (page.items.length === 0) {
        root.append(el("p", { class: "empty" }, "No kudos yet. Be the first to send one."));
        return;
      }
      for (const k of page.items) {
        list.append(
          el(
            "li",
            { class: "kudos" },
            el("p", { class: "kudos-meta" }, `${who(k.from_user_id)} → ${who(k.to_user_id)} · ${k.created_at}`),
            el("p", { class: "kudos-body" }, k.message),
          ),
        );
      }
      root.append(list);
    },
    (err: unknown) => root.append(statusLine("error", messageOf(err))),
  );
  return root;
}

export function createKudosSendView(api: ApiClient): HTMLElement {
  const root = el("section", { "aria-label": "Send kudos" });
  const toInput = textInput({ placeholder: "recipient user id" });
  const messageArea = textarea({ rows: "3", maxlength: String(MAX_KUDOS_LEN) });
  const problem = el("div", { class: "problem-slot" });

  async function send(): Promise<void> {
    clear(problem);
    if (messageArea.value.trim() === "") {
      problem.append(statusLine("error", "Write something first."));
      return;
    }
    try {
      await api.sendKudos(toInput.value.trim(), messageArea.value);
      messageArea.value = "";
      problem.append(statusLine("ok", "Kudos sent."));
    } catch (err) {
      problem.append(statusLine("error", messageOf(err)));
    }
  }

  const form = el(
    "form",
    { class: "kudos-form" },
    el("h2", {}, "Send kudos"),
    labeled("To (user id)", toInput),
    labeled("Message", messageArea),
    problem,
    button(
      "Send kudos",
      () => {
        void send();
      },
      { class: "cta" },
    ),
  );
  form.addEventListener("submit", (ev) => ev.preventDefault());
  root.append(form);
  return root;
}

// --- team submissions ---------------------------------------------------------------

export function createTeamView(api: ApiClient, openDetail: (id: string) => void): HTMLElement {
  const root = el("section", { "aria-label": "Team check-ins" });
  root.append(el("h2", {}, "Team check-ins"));

  void api.listCheckins().then(
    (page) => {
      if (page.items.length === 0) {
        root.append(el("p", { class: "empty" }, "No check-ins visible yet."));
        return;
      }
      const list = el("ul", { class: "submission-list" });
      for (const s of page.items) {
        const item = el(
          "li",
          {},
          el("span", {}, `${s.period} · ${shortId(s.user_id)} · revision ${s.revision} `),
        );
        item.append(button(`Open check-in ${s.period} by ${shortId(s.user_id)}`, () => openDetail(s.id)));
        list.append(item);
      }
      root.append(list, el("p", { class: "muted" }, `${page.total_count} total`));
    },
    (err: unknown) => root.append(statusLine("error", messageOf(err))),
  );
  return root;
}

export function createSubmissionDetailView(
  api: ApiClient,
  submissionId: string,
  profile: Profile,
): HTMLElement {
  const root = el("section", { "aria-label": "Check-in detail" });

  void api.getCheckin(submissionId).then(
    (submission: Submission) => {
      root.append(el("h2", {}, `Check-in for ${submission.period}`));
      const list = el("dl", {});
      for (const a of submission.answers) {
        list.append(el("dt", {}, shortId(a.question_id)), el("dd", {}, String(a.value)));
      }
      root.append(
        el("p", { class: "muted" }, `Revision ${submission.revision}, submitted ${submission.submitted_at}`),
        list,
        createThread({
          api,
          submission,
          template: null, // prompts unavailable outside the owner's current form
          names: new Map([[profile.id, profile.display_name]]),
        }),
      );
    },
    (err: unknown) => {
      if (err instanceof ApiError && err.envelope.code === "FORBIDDEN") {
        root.append(statusLine("error", "You do not have access to this check-in."));
        return;
      }
      root.append(statusLine("error", messageOf(err)));
    },
  );
  return root;
}

// --- flags ------------------------------------------------------------------------

export function createFlagsView(api: ApiClient): HTMLElement {
  const root = el("section", { "aria-label": "Red flags" });
  root.append(el("h2", {}, "Red flags"));

  void api.flags().then(
    (page) => {
      if (page.items.length === 0) {
        root.append(el("p", { class: "empty" }, "No flags on record."));
        return;
      }
      const list = el("ul", { class: "flags" });
      for (const f of page.items) {
        list.append(
          el(
            "li",
            { class: `flag flag-${f.severity.toLowerCase()}` },
            el("strong", {}, `${f.rule} (${f.severity})`),
            el("span", {}, ` ${f.subject_kind} ${shortId(f.subject_id)} · ${f.period_end} — ${f.details}`),
          ),
        );
      }
      root.append(list);
    },
    (err: unknown) => root.append(statusLine("error", messageOf(err))),
  );
  return root;
}
