/** Comment thread for one submission: chronological list, per-question
 * anchors rendered beside the prompt they reference, composer appends
 * without a reload. */

import type { ApiClient, Comment, Submission, Template } from "./api";
import { button, clear, el, labeled, statusLine, textarea } from "./dom";

export const MAX_COMMENT_LEN = 2000;

export interface ThreadOptions {
  api: ApiClient;
  submission: Submission;
  template: Template | null; // resolves question prompts for anchors
  names: Map<string, string>; // author_id -> display name
}

export function createThread(options: ThreadOptions): HTMLElement {
  const { api, submission } = options;
  const root = el("section", { class: "thread", "aria-label": "Comments" });
  const list = el("ol", { class: "comment-list" });
  const empty = el("p", { class: "empty" }, "No comments yet. Start the conversation.");

  function promptFor(questionId: string | null): string | null {
    if (!questionId || !options.template) return null;
    const q = options.template.questions.find((q) => q.id === questionId);
    return q ? q.prompt : null;
  }

  function renderComment(comment: Comment): HTMLElement {
    const item = el("li", { class: "comment" });
    const author = options.names.get(comment.author_id) ?? "Someone";
    item.append(el("p", { class: "comment-meta" }, `${author} · ${comment.created_at}`));
    const anchor = promptFor(comment.question_id);
    if (anchor) item.append(el("p", { class: "comment-anchor" }, `On: ${anchor}`));
    item.append(el("p", { class: "comment-body" }, comment.body));
    return item;
  }

  function setComments(comments: Comment[]): void {
    clear(list);
    for (const c of comments) list.append(renderComment(c));
    empty.hidden = comments.length > 0;
  }

  const area = textarea({ rows: "3", maxlength: String(MAX_COMMENT_LEN) });
  const anchorSelect = el("select", {});
  anchorSelect.append(el("option", { value: "" }, "Whole check-in"));
  for (const q of options.template?.questions ?? []) {
    anchorSelect.append(el("option", { value: q.id }, q.prompt));
  }
  const problem = el("div", { class: "problem-slot" });
  const composer = el(
    "form",
    { class: "composer" },
    labeled("Add a comment", area),
    labeled("Attach to", anchorSelect),
    problem,
    button(
      "Post comment",
      () => {
        void post();
      },
      { class: "cta" },
    ),
  );
  composer.addEventListener("submit", (ev) => ev.preventDefault());

  async function post(): Promise<void> {
    clear(problem);
    const body = area.value.trim();
    if (body === "") {
      problem.append(statusLine("error", "Write something first."));
      return;
    }
    try {
      const created = await api.postComment(
        submission.id,
        area.value,
        anchorSelect.value || undefined,
      );
      list.append(renderComment(created));
      empty.hidden = true;
      area.value = "";
    } catch (err) {
      const message = err instanceof Error ? err.message : String(err);
      problem.append(statusLine("error", message));
    }
  }

  root.append(el("h3", {}, "Comments"), empty, list, composer);

  void api.listComments(submission.id).then(
    (page) => setComments(page.items),
    (err: unknown) => {
      const message = err instanceof Error ? err.message : String(err);
      root.prepend(statusLine("error", message));
    },
  );

  return root;
}
