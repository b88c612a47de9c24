/** Shell: login gate, role-gated routing, logout. The bearer token lives
 * only inside the ApiClient, so a page reload always lands on login. */

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";
import { ApiError } from "../src/api";
import { createShell } from "../src/main";
import { flush, formOf, profileOf, stubApi, submissionOf } from "./helpers";

let root: HTMLElement;

beforeEach(() => {
  window.location.hash = "";
  root = document.createElement("div");
  document.body.append(root);
});

afterEach(() => {
  document.body.innerHTML = "";
});

const NO_FORM = new ApiError(404, {
  code: "NOT_FOUND",
  message: "no active check-in covers the current period",
});

describe("shell", () => {
  it("shows login until a profile exists", () => {
    const shell = createShell(root, stubApi());
    shell.render();
    expect(root.textContent).toContain("Sign in");
    expect(root.querySelector("nav")).toBeNull();
  });

  it("renders nav plus the default route after login", async () => {
    const api = stubApi({
      login: vi.fn().mockResolvedValue(profileOf("employee", "Eve Castillo")),
      currentForm: vi.fn().mockRejectedValue(NO_FORM),
    });
    const shell = createShell(root, api);
    shell.render();
    Array.from(root.querySelectorAll("button"))
      .find((b) => b.textContent === "Sign in")!
      .click();
    await flush();
    expect(root.querySelector("nav")).not.toBeNull();
    expect(root.textContent).toContain("Eve Castillo (employee)");
    expect(root.textContent).toContain("No active check-in covers the current period.");
  });

  it("blocks routes outside the role's nav", async () => {
    const api = stubApi();
    const shell = createShell(root, api);
    shell.setProfile(profileOf("employee"));
    window.location.hash = "#/admin/groups";
    shell.render();
    await flush();
    expect(root.textContent).toContain("Your role does not include this page.");
  });

  it("routes team detail hashes to the submission view", async () => {
    const submission = submissionOf([{ question_id: "q-mood", value: 3 }]);
    const api = stubApi({
      getCheckin: vi.fn().mockResolvedValue(submission),
      listComments: vi.fn().mockResolvedValue({ items: [] }),
    });
    const shell = createShell(root, api);
    shell.setProfile(profileOf("manager"));
    window.location.hash = `#/team/${submission.id}`;
    shell.render();
    await flush();
    expect(api.getCheckin).toHaveBeenCalledWith(submission.id);
    expect(root.textContent).toContain("Check-in for 2026-W33");
  });

  it("marks unknown routes", async () => {
    const shell = createShell(root, stubApi());
    shell.setProfile(profileOf("admin"));
    window.location.hash = "#/no-such-page";
    shell.render();
    await flush();
    expect(root.textContent).toContain("Page not found.");
  });

  it("logs out back to the login screen", async () => {
    const logout = vi.fn().mockResolvedValue(undefined);
    const api = stubApi({
      currentForm: vi.fn().mockRejectedValue(NO_FORM),
      logout,
    });
    const shell = createShell(root, api);
    shell.setProfile(profileOf("manager"));
    window.location.hash = "#/checkin";
    shell.render();
    await flush();
    Array.from(root.querySelectorAll("button"))
      .find((b) => b.textContent === "Log out")!
      .click();
    await flush();
    expect(logout).toHaveBeenCalled();
    expect(root.textContent).toContain("Sign in");
    expect(root.querySelector("nav")).toBeNull();
  });

  it("defaults the empty hash to the check-in route", async () => {
    const api = stubApi({ currentForm: vi.fn().mockResolvedValue(formOf()) });
    const shell = createShell(root, api);
    shell.setProfile(profileOf("employee"));
    window.location.hash = "";
    shell.render();
    await flush();
    expect(root.textContent).toContain("My check-in");
    expect(root.textContent).toContain("Step 1 of 4");
  });
});
