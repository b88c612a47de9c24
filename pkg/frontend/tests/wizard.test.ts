/** Wizard behavior: one question per step, blocking validation that mirrors
 * the server, prefilled revisions, and inline server refusals that keep
 * every answer. */

import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiError } from "../src/api";
import type { AnswerOut, Submission } from "../src/api";
import { collectAnswers, createWizard, prefilled, stepProblem } from "../src/wizard";
import { TEMPLATE, formOf, question, submissionOf } from "./helpers";

afterEach(() => {
  document.body.innerHTML = "";
});

function mount(node: HTMLElement): HTMLElement {
  document.body.append(node);
  return node;
}

function btn(root: HTMLElement, label: string): HTMLButtonElement {
  const match = Array.from(root.querySelectorAll("button")).find((b) => b.textContent === label);
  if (!match) throw new Error(`no button labeled ${label}`);
  return match;
}

function pickLikert(root: HTMLElement, questionId: string, value: number): void {
  const radio = root.querySelector<HTMLInputElement>(`#likert-${questionId}-${value}`);
  if (!radio) throw new Error(`no radio for ${questionId}=${value}`);
  radio.click();
}

describe("step validation rules", () => {
  const likert = question("q1", "Mood?", "likert5");
  const text = question("q2", "Notes?", "free_text");

  it("requires an answer for required questions", () => {
    expect(stepProblem(likert, new Map())).toMatch(/pick one/i);
    expect(stepProblem(text, new Map())).toMatch(/needs an answer/i);
    expect(stepProblem({ ...likert, required: false }, new Map())).toBeNull();
  });

  it("bounds likert values and text length", () => {
    expect(stepProblem(likert, new Map([["q1", 0]]))).toMatch(/1 to 5/);
    expect(stepProblem(likert, new Map([["q1", 6]]))).toMatch(/1 to 5/);
    expect(stepProblem(likert, new Map([["q1", 3]]))).toBeNull();
    expect(stepProblem(text, new Map([["q2", "x".repeat(4001)]]))).toMatch(/4000/);
    expect(stepProblem(text, new Map([["q2", "fine"]]))).toBeNull();
  });

  it("collects only answered questions", () => {
    const state = new Map<string, number | string>([
      ["q-mood", 4],
      ["q-note", "   "],
    ]);
    expect(collectAnswers(TEMPLATE.questions, state)).toEqual([
      { question_id: "q-mood", value: 4 },
    ]);
  });
});

describe("wizard flow", () => {
  it("renders one question per step with a progress indicator", () => {
    const root = mount(createWizard({ form: formOf(), submit: vi.fn() }));
    expect(root.textContent).toContain("Step 1 of 4");
    expect(root.querySelectorAll("fieldset")).toHaveLength(1);
    expect(root.textContent).toContain("How was your week overall?");
    expect(root.textContent).not.toContain("workload");
    // five labeled options
    const labels = Array.from(root.querySelectorAll(".likert-option label")).map(
      (l) => l.textContent,
    );
    expect(labels).toEqual([
      "1 — Very low",
      "2 — Low",
      "3 — Neutral",
      "4 — Good",
      "5 — Very good",
    ]);
  });

  it("blocks a skipped required question and stays on the step", () => {
    const root = mount(createWizard({ form: formOf(), submit: vi.fn() }));
    btn(root, "Next").click();
    expect(root.textContent).toContain("Pick one of the five options");
    expect(root.textContent).toContain("Step 1 of 4");
  });

  it("walks to review and submits the collected answers", async () => {
    const submit = vi
      .fn<[AnswerOut[]], Promise<Submission>>()
      .mockImplementation((answers) =>
        Promise.resolve(submissionOf(answers)),
      );
    const root = mount(createWizard({ form: formOf(), submit }));

    pickLikert(root, "q-mood", 4);
    btn(root, "Next").click();
    pickLikert(root, "q-load", 2);
    btn(root, "Next").click();
    const area = root.querySelector("textarea");
    expect(area).not.toBeNull();
    area!.value = "Shipping week.";
    area!.dispatchEvent(new Event("input"));
    btn(root, "Next").click();

    expect(root.textContent).toContain("Review — step 4 of 4");
    expect(root.textContent).toContain("4 — Good");
    expect(root.textContent).toContain("Shipping week.");

    btn(root, "Submit check-in").click();
    await vi.waitFor(() => expect(root.textContent).toContain("Check-in submitted for 2026-W33"));
    expect(submit).toHaveBeenCalledWith([
      { question_id: "q-mood", value: 4 },
      { question_id: "q-load", value: 2 },
      { question_id: "q-note", value: "Shipping week." },
    ]);
  });

  it("supports moving back without losing the answer", () => {
    const root = mount(createWizard({ form: formOf(), submit: vi.fn() }));
    pickLikert(root, "q-mood", 5);
    btn(root, "Next").click();
    btn(root, "Back").click();
    const radio = root.querySelector<HTMLInputElement>("#likert-q-mood-5");
    expect(radio?.checked).toBe(true);
  });
});

describe("revision", () => {
  const priorForm = formOf(
    submissionOf(
      [
        { question_id: "q-mood", value: 3 },
        { question_id: "q-load", value: 3 },
        { question_id: "q-note", value: "meh" },
      ],
      1,
    ),
  );

  it("pre-fills prior answers", () => {
    const state = prefilled(priorForm);
    expect(state.get("q-mood")).toBe(3);
    expect(state.get("q-note")).toBe("meh");

    const root = mount(createWizard({ form: priorForm, submit: vi.fn() }));
    expect(root.querySelector<HTMLInputElement>("#likert-q-mood-3")?.checked).toBe(true);
  });

  it("labels the submit as an update and confirms the new revision", async () => {
    const submit = vi.fn((answers: AnswerOut[]) => Promise.resolve(submissionOf(answers, 2)));
    const root = mount(createWizard({ form: priorForm, submit }));
    btn(root, "Next").click();
    btn(root, "Next").click();
    btn(root, "Next").click();
    btn(root, "Update check-in").click();
    await vi.waitFor(() => expect(root.textContent).toContain("updated for 2026-W33 (revision 2)"));
  });
});

describe("server refusals", () => {
  it("renders WINDOW_CLOSED inline and keeps the answers", async () => {
    const submit = vi
      .fn<[AnswerOut[]], Promise<Submission>>()
      .mockRejectedValue(
        new ApiError(409, { code: "WINDOW_CLOSED", message: "period 2026-W33 is closed" }),
      );
    const root = mount(createWizard({ form: formOf(), submit }));
    pickLikert(root, "q-mood", 2);
    btn(root, "Next").click();
    pickLikert(root, "q-load", 1);
    btn(root, "Next").click();
    btn(root, "Next").click();
    btn(root, "Submit check-in").click();

    await vi.waitFor(() => expect(root.textContent).toContain("period 2026-W33 is closed"));
    // still on review with every answer shown; nothing was wiped
    expect(root.textContent).toContain("Review — step 4 of 4");
    expect(root.textContent).toContain("2 — Low");
    btn(root, "Back").click(); // review -> free text
    btn(root, "Back").click(); // -> workload
    expect(root.querySelector<HTMLInputElement>("#likert-q-load-1")?.checked).toBe(true);
    btn(root, "Back").click(); // -> mood
    expect(root.querySelector<HTMLInputElement>("#likert-q-mood-2")?.checked).toBe(true);
  });

  it("renders VALIDATION inline the same way", async () => {
    const submit = vi
      .fn<[AnswerOut[]], Promise<Submission>>()
      .mockRejectedValue(
        new ApiError(422, { code: "VALIDATION", message: "invalid request" }),
      );
    const root = mount(createWizard({ form: formOf(), submit }));
    pickLikert(root, "q-mood", 2);
    btn(root, "Next").click();
    pickLikert(root, "q-load", 1);
    btn(root, "Next").click();
    btn(root, "Next").click();
    btn(root, "Submit check-in").click();
    await vi.waitFor(() => expect(root.textContent).toContain("invalid request"));
    expect(btn(root, "Submit check-in")).toBeTruthy();
  });
});
