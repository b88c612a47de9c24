/** Screen views: login with forced rotation, the check-in page states,
 * kudos surfaces, team list and detail, flags. */

import { afterEach, describe, expect, it, vi } from "vitest";
import { ApiError } from "../src/api";
import type { Profile } from "../src/api";
import {
  createCheckinView,
  createFlagsView,
  createKudosFeedView,
  createKudosSendView,
  createLoginView,
  createSubmissionDetailView,
  createTeamView,
  rotationRequired,
  shortId,
} from "../src/views";
import { DASHBOARD, flush, formOf, profileOf, stubApi, submissionOf } from "./helpers";

afterEach(() => {
  document.body.innerHTML = "";
});

function press(root: HTMLElement, label: string): void {
  const match = Array.from(root.querySelectorAll("button")).find((b) => b.textContent === label);
  if (!match) throw new Error(`no button ${label}`);
  match.click();
}

function fill(root: HTMLElement, labelText: string, value: string): void {
  const label = Array.from(root.querySelectorAll("label")).find((l) => l.textContent === labelText);
  if (!label) throw new Error(`no label ${labelText}`);
  const control = root.querySelector<HTMLInputElement>(`#${label.htmlFor}`);
  if (!control) throw new Error(`label ${labelText} points nowhere`);
  control.value = value;
}

const ROTATION_ERROR = new ApiError(422, {
  code: "VALIDATION",
  message: "invalid request",
  details: [{ code: "PASSWORD_CHANGE_REQUIRED", path: "new_password" }],
});

describe("login", () => {
  it("hands the profile to the shell on success", async () => {
    const user = profileOf("employee");
    const login = vi.fn().mockResolvedValue(user);
    const seen: Profile[] = [];
    const root = createLoginView(stubApi({ login }), (p) => seen.push(p));
    document.body.append(root);
    fill(root, "Email", " e@example.com ");
    fill(root, "Password", "pw");
    press(root, "Sign in");
    await flush();
    expect(login).toHaveBeenCalledWith("e@example.com", "pw", undefined);
    expect(seen).toEqual([user]);
  });

  it("walks the forced rotation without losing the credentials", async () => {
    const user = profileOf("employee");
    const login = vi.fn().mockRejectedValueOnce(ROTATION_ERROR).mockResolvedValueOnce(user);
    const seen: Profile[] = [];
    const root = createLoginView(stubApi({ login }), (p) => seen.push(p));
    document.body.append(root);

    fill(root, "Email", "e@example.com");
    fill(root, "Password", "one-time-pw");
    press(root, "Sign in");
    await flush();
    expect(root.textContent).toContain("Choose a new password");

    fill(root, "New password", "fresh-password");
    press(root, "Sign in");
    await flush();
    expect(login).toHaveBeenLastCalledWith("e@example.com", "one-time-pw", "fresh-password");
    expect(seen).toEqual([user]);
  });

  it("shows the uniform credentials message", async () => {
    const login = vi
      .fn()
      .mockRejectedValue(
        new ApiError(401, { code: "UNAUTHENTICATED", message: "invalid credentials" }),
      );
    const root = createLoginView(stubApi({ login }), () => undefined);
    document.body.append(root);
    press(root, "Sign in");
    await flush();
    expect(root.textContent).toContain("invalid credentials");
  });

  it("classifies only the rotation detail as rotation", () => {
    expect(rotationRequired(ROTATION_ERROR)).toBe(true);
    expect(
      rotationRequired(new ApiError(422, { code: "VALIDATION", message: "invalid request" })),
    ).toBe(false);
    expect(
      rotationRequired(new ApiError(409, { code: "CONFLICT", message: "x" })),
    ).toBe(false);
  });
});

describe("check-in page", () => {
  it("mounts the wizard for the current form", async () => {
    const api = stubApi({ currentForm: vi.fn().mockResolvedValue(formOf()) });
    const root = createCheckinView(api, profileOf("employee"));
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("Weekly Pulse — 2026-W33");
    expect(root.textContent).toContain("Step 1 of 4");
    expect(root.querySelector(".thread")).toBeNull(); // no submission yet
  });

  it("adds the comment thread once a submission exists", async () => {
    const submission = submissionOf([{ question_id: "q-mood", value: 4 }]);
    const api = stubApi({
      currentForm: vi.fn().mockResolvedValue(formOf(submission)),
      listComments: vi.fn().mockResolvedValue({ items: [] }),
    });
    const root = createCheckinView(api, profileOf("employee"));
    document.body.append(root);
    await flush();
    expect(root.querySelector(".thread")).not.toBeNull();
    // revising: the prior answer is pre-selected
    expect(root.querySelector<HTMLInputElement>("#likert-q-mood-4")?.checked).toBe(true);
  });

  it("explains when no check-in covers the period", async () => {
    const api = stubApi({
      currentForm: vi
        .fn()
        .mockRejectedValue(
          new ApiError(404, {
            code: "NOT_FOUND",
            message: "no active check-in covers the current period",
          }),
        ),
    });
    const root = createCheckinView(api, profileOf("employee"));
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("No active check-in covers the current period.");
  });
});

describe("kudos", () => {
  it("renders the feed chronologically with sender and recipient", async () => {
    const api = stubApi({
      kudosFeed: vi.fn().mockResolvedValue({
        items: [
          {
            id: "k1",
            from_user_id: "aaaaaaaa-1111-4000-8000-000000000001",
            to_user_id: "bbbbbbbb-2222-4000-8000-000000000002",
            message: "Great incident response 🚀",
            created_at: "2026-08-11T10:00:00Z",
          },
        ],
      }),
    });
    const root = createKudosFeedView(api);
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("Great incident response 🚀");
    expect(root.textContent).toContain("aaaaaaaa… → bbbbbbbb…");
  });

  it("shows an empty feed prompt", async () => {
    const api = stubApi({ kudosFeed: vi.fn().mockResolvedValue({ items: [] }) });
    const root = createKudosFeedView(api);
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("No kudos yet");
  });

  it("sends kudos and confirms", async () => {
    const sendKudos = vi.fn().mockResolvedValue({});
    const root = createKudosSendView(stubApi({ sendKudos }));
    document.body.append(root);
    fill(root, "To (user id)", " u-42 ");
    root.querySelector("textarea")!.value = "Thanks for the review!";
    press(root, "Send kudos");
    await flush();
    expect(sendKudos).toHaveBeenCalledWith("u-42", "Thanks for the review!");
    expect(root.textContent).toContain("Kudos sent.");
    expect(root.querySelector("textarea")!.value).toBe("");
  });

  it("keeps the message when the server refuses self-kudos", async () => {
    const sendKudos = vi
      .fn()
      .mockRejectedValue(
        new ApiError(422, { code: "VALIDATION", message: "invalid request" }),
      );
    const root = createKudosSendView(stubApi({ sendKudos }));
    document.body.append(root);
    root.querySelector("textarea")!.value = "Self-five";
    press(root, "Send kudos");
    await flush();
    expect(root.textContent).toContain("invalid request");
    expect(root.querySelector("textarea")!.value).toBe("Self-five");
  });

  it("blocks an empty message before any request", async () => {
    const sendKudos = vi.fn();
    const root = createKudosSendView(stubApi({ sendKudos }));
    document.body.append(root);
    press(root, "Send kudos");
    await flush();
    expect(root.textContent).toContain("Write something first.");
    expect(sendKudos).not.toHaveBeenCalled();
  });
});

describe("team list and detail", () => {
  it("lists visible submissions and opens details", async () => {
    const submission = submissionOf([{ question_id: "q-mood", value: 2 }]);
    const api = stubApi({
      listCheckins: vi
        .fn()
        .mockResolvedValue({ items: [submission], page: 1, page_size: 20, total_count: 1 }),
    });
    const opened: string[] = [];
    const root = createTeamView(api, (id) => opened.push(id));
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("2026-W33");
    expect(root.textContent).toContain("1 total");
    press(root, `Open check-in 2026-W33 by ${shortId(submission.user_id)}`);
    expect(opened).toEqual([submission.id]);
  });

  it("renders answers and the thread in the detail view", async () => {
    const submission = submissionOf([
      { question_id: "q-mood", value: 2 },
      { question_id: "q-note", value: "tough sprint" },
    ]);
    const api = stubApi({
      getCheckin: vi.fn().mockResolvedValue(submission),
      listComments: vi.fn().mockResolvedValue({ items: [] }),
    });
    const root = createSubmissionDetailView(api, submission.id, profileOf("manager"));
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("Check-in for 2026-W33");
    expect(root.textContent).toContain("tough sprint");
    expect(root.querySelector(".thread")).not.toBeNull();
  });

  it("turns FORBIDDEN into an access notice", async () => {
    const api = stubApi({
      getCheckin: vi
        .fn()
        .mockRejectedValue(
          new ApiError(403, { code: "FORBIDDEN", message: "role employee may not do this" }),
        ),
    });
    const root = createSubmissionDetailView(api, "s-1", profileOf("employee"));
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("You do not have access to this check-in.");
  });
});

describe("flags view", () => {
  it("lists persisted flags with rule, severity, and period", async () => {
    const api = stubApi({ flags: vi.fn().mockResolvedValue({ items: DASHBOARD.flags }) });
    const root = createFlagsView(api);
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("LOW_WEEK (High)");
    expect(root.textContent).toContain("2026-W33");
    expect(root.querySelector(".flag-high")).not.toBeNull();
  });

  it("has an empty state", async () => {
    const api = stubApi({ flags: vi.fn().mockResolvedValue({ items: [] }) });
    const root = createFlagsView(api);
    document.body.append(root);
    await flush();
    expect(root.textContent).toContain("No flags on record.");
  });
});

describe("shortId", () => {
  it("truncates uuids but keeps short ids whole", () => {
    expect(shortId("aaaaaaaa-1111-4000-8000-000000000001")).toBe("aaaaaaaa…");
    expect(shortId("u-42")).toBe("u-42");
  });
});
