/** App shell: session state, hash routing, role gating. The bearer token
 * lives inside the ApiClient instance; nothing here touches localStorage
 * or cookies, so closing the tab ends the session. */

import type { Profile } from "./api";
import { ApiClient } from "./api";
import { createGroupEditor, createScheduleBuilder, createTemplateBuilder } from "./builders";
import { createDashboardRoute } from "./dashboard";
import { clear, el, statusLine } from "./dom";
import { navFor, renderNav } from "./nav";
import { cssVariables } from "./theme";
import {
  createCheckinView,
  createFlagsView,
  createKudosFeedView,
  createKudosSendView,
  createLoginView,
  createSubmissionDetailView,
  createTeamView,
} from "./views";

export type ViewFactory = (api: ApiClient, profile: Profile) => HTMLElement;

const ROUTES: Record<string, ViewFactory> = {
  "#/checkin": (api, profile) => createCheckinView(api, profile),
  "#/kudos": (api) => createKudosFeedView(api),
  "#/kudos/send": (api) => createKudosSendView(api),
  "#/team": (api) =>
    createTeamView(api, (id) => {
      window.location.hash = `#/team/${id}`;
    }),
  "#/dashboard": (api, profile) => createDashboardRoute(api, profile),
  "#/flags": (api) => createFlagsView(api),
  "#/admin/groups": (api) => createGroupEditor(api),
  "#/admin/templates": (api) => createTemplateBuilder(api),
  "#/admin/schedules": (api) => createScheduleBuilder(api),
};

/** The nav root a route belongs to, e.g. #/team/<id> gates like #/team. */
export function navRoot(route: string): string {
  if (route.startsWith("#/team/")) return "#/team";
  return route;
}

export function routeAllowed(role: Profile["role"], route: string): boolean {
  const root = navRoot(route);
  return navFor(role).some((item) => item.route === root);
}

export interface Shell {
  render: () => void;
  setProfile: (p: Profile | null) => void;
}

export function createShell(root: HTMLElement, api: ApiClient): Shell {
  let profile: Profile | null = null;

  function currentRoute(): string {
    const hash = window.location.hash;
    return hash === "" || hash === "#" || hash === "#/" ? "#/checkin" : hash;
  }

  function logout(): void {
    void api.logout().catch(() => undefined); // token is gone either way
    profile = null;
    window.location.hash = "#/";
    render();
  }

  function render(): void {
    clear(root);
    if (profile === null) {
      root.append(
        el("h1", {}, "Team well-being"),
        createLoginView(api, (p) => {
          profile = p;
          window.location.hash = "#/checkin";
          render();
        }),
      );
      return;
    }
    const route = currentRoute();
    root.append(el("h1", {}, "Team well-being"), renderNav(profile, navRoot(route), logout));
    const main = el("main", {});
    const known = route.startsWith("#/team/") || ROUTES[route] !== undefined;
    if (!known) {
      main.append(statusLine("error", "Page not found."));
    } else if (!routeAllowed(profile.role, route)) {
      main.append(statusLine("error", "Your role does not include this page."));
    } else if (route.startsWith("#/team/")) {
      main.append(createSubmissionDetailView(api, route.slice("#/team/".length), profile));
    } else {
      const factory = ROUTES[route];
      if (factory) main.append(factory(api, profile));
    }
    root.append(main);
  }

  return {
    render,
    setProfile: (p) => {
      profile = p;
    },
  };
}

export function boot(): void {
  document.documentElement.setAttribute("style", cssVariables());
  const mount = document.getElementById("app");
  if (!mount) throw new Error("missing #app mount point");
  const api = new ApiClient();
  const shell = createShell(mount, api);
  window.addEventListener("hashchange", () => shell.render());
  shell.render();
}

// Bundled entry point runs in a page; tests import the pieces instead.
if (typeof document !== "undefined" && document.getElementById("app")) {
  boot();
}
