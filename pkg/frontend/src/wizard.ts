/** Multi-step check-in wizard: one question per step, then a review step.
 * Client-side checks mirror the server rules so most VALIDATION round-trips
 * never happen; server refusals render inline and lose no answers. */

import type { AnswerOut, CurrentForm, Question, Submission } from "./api";
import { InFlight } from "./api";
import { button, clear, el, labeled, statusLine, textarea } from "./dom";

export const MAX_TEXT_ANSWER_LEN = 4000;

const LIKERT_WORDING: Record<number, string> = {
  1: "Very low",
  2: "Low",
  3: "Neutral",
  4: "Good",
  5: "Very good",
};

export type WizardState = Map<string, number | string>;

export function prefilled(form: CurrentForm): WizardState {
  const state: WizardState = new Map();
  if (form.submission) {
    for (const a of form.submission.answers) state.set(a.question_id, a.value);
  }
  return state;
}

/** null when the step may advance, else the message that blocks it. */
export function stepProblem(question: Question, state: WizardState): string | null {
  const value = state.get(question.id);
  if (question.kind === "likert5") {
    if (value === undefined) {
      return question.required ? "Pick one of the five options to continue." : null;
    }
    if (typeof value !== "number" || value < 1 || value > 5) {
      return "Answers range from 1 to 5.";
    }
    return null;
  }
  const text = typeof value === "string" ? value.trim() : "";
  if (question.required && text === "") return "This question needs an answer.";
  if (typeof value === "string" && value.length > MAX_TEXT_ANSWER_LEN) {
    return `Keep it under ${MAX_TEXT_ANSWER_LEN} characters.`;
  }
  return null;
}

export function collectAnswers(questions: Question[], state: WizardState): AnswerOut[] {
  const out: AnswerOut[] = [];
  for (const q of questions) {
    const value = state.get(q.id);
    if (value === undefined) continue;
    if (typeof value === "string" && value.trim() === "") continue;
    out.push({ question_id: q.id, value });
  }
  return out;
}

export interface WizardOptions {
  form: CurrentForm;
  submit: (answers: AnswerOut[]) => Promise<Submission>;
}

export function createWizard(options: WizardOptions): HTMLElement {
  const { form } = options;
  const questions = form.template.questions;
  const state = prefilled(form);
  const inFlight = new InFlight<Submission>();
  let step = 0; // 0..questions.length-1 are questions, questions.length is review

  const root = el("section", { class: "wizard", "aria-label": `Check-in for ${form.period}` });

  function render(): void {
    clear(root);
    root.append(
      el("h2", {}, `${form.template.title} — ${form.period}`),
      el(
        "p",
        { class: "progress", "aria-label": "Progress" },
        step < questions.length
          ? `Step ${step + 1} of ${questions.length + 1}`
          : `Review — step ${questions.length + 1} of ${questions.length + 1}`,
      ),
    );
    const question = questions[step];
    if (question !== undefined) renderQuestion(question);
    else renderReview();
  }

  function renderQuestion(question: Question): void {
    const body = el("div", { class: "wizard-step" });
    if (question.kind === "likert5") {
      const fieldset = el("fieldset", {});
      fieldset.append(el("legend", {}, question.prompt));
      const chosen = state.get(question.id);
      for (let v = 1; v <= 5; v++) {
        const id = `likert-${question.id}-${v}`;
        const radio = el("input", {
          type: "radio",
          name: `q-${question.id}`,
          id,
          value: String(v),
        });
        if (chosen === v) radio.checked = true;
        radio.addEventListener("change", () => state.set(question.id, v));
        fieldset.append(
          el("div", { class: "likert-option" }, radio, el("label", { for: id }, `${v} — ${LIKERT_WORDING[v]}`)),
        );
      }
      body.append(fieldset);
    } else {
      const area = textarea({ rows: "5", maxlength: String(MAX_TEXT_ANSWER_LEN) });
      const existing = state.get(question.id);
      if (typeof existing === "string") area.value = existing;
      area.addEventListener("input", () => state.set(question.id, area.value));
      body.append(labeled(question.prompt, area));
      if (!question.required) body.append(el("p", { class: "hint" }, "Optional."));
    }

    const problem = el("div", { class: "problem-slot" });
    const controls = el("div", { class: "wizard-controls" });
    if (step > 0) {
      controls.append(
        button("Back", () => {
          step -= 1;
          render();
        }),
      );
    }
    controls.append(
      button(
        "Next",
        () => {
          const message = stepProblem(question, state);
          if (message) {
            clear(problem);
            problem.append(statusLine("error", message));
            return;
          }
          step += 1;
          render();
        },
        { class: "cta" },
      ),
    );
    root.append(body, problem, controls);
  }

  function renderReview(): void {
    const body = el("div", { class: "wizard-review" });
    body.append(el("h3", {}, "Review your answers"));
    const list = el("dl", {});
    for (const q of questions) {
      const value = state.get(q.id);
      const shown =
        value === undefined || (typeof value === "string" && value.trim() === "")
          ? "(no answer)"
          : typeof value === "number"
            ? `${value} — ${LIKERT_WORDING[value]}`
            : value;
      list.append(el("dt", {}, q.prompt), el("dd", {}, String(shown)));
    }
    body.append(list);

    const problem = el("div", { class: "problem-slot" });
    const controls = el("div", { class: "wizard-controls" });
    controls.append(
      button("Back", () => {
        step -= 1;
        render();
      }),
    );
    const revising = form.submission !== null;
    controls.append(
      button(
        revising ? "Update check-in" : "Submit check-in",
        () => {
          void send(problem);
        },
        { class: "cta" },
      ),
    );
    root.append(body, problem, controls);
  }

  async function send(problem: HTMLElement): Promise<void> {
    for (const q of questions) {
      const message = stepProblem(q, state);
      if (message) {
        clear(problem);
        problem.append(statusLine("error", `${q.prompt} ${message}`));
        return;
      }
    }
    clear(problem);
    try {
      const submission = await inFlight.run(() =>
        options.submit(collectAnswers(questions, state)),
      );
      clear(root);
      root.append(
        el("h2", {}, form.template.title),
        statusLine(
          "ok",
          submission.revision > 1
            ? `Check-in updated for ${submission.period} (revision ${submission.revision}).`
            : `Check-in submitted for ${submission.period}.`,
        ),
      );
    } catch (err) {
      // answers stay in state; the user edits and retries
      const message = err instanceof Error ? err.message : String(err);
      problem.append(statusLine("error", message));
    }
  }

  render();
  return root;
}
