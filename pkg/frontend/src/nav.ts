/** Role-gated navigation. The visible items per role mirror the server's
 * permission matrix exactly: employees see their own check-in plus the
 * org-wide kudos surfaces, managers add dashboards and flags for groups
 * they manage, admins add the builder screens. */

import type { Profile } from "./api";
import { el } from "./dom";

export interface NavItem {
  readonly label: string;
  readonly route: string;
}

const EMPLOYEE_NAV: NavItem[] = [
  { label: "My check-in", route: "#/checkin" },
  { label: "Kudos feed", route: "#/kudos" },
  { label: "Send kudos", route: "#/kudos/send" },
];

const MANAGER_NAV: NavItem[] = [
  ...EMPLOYEE_NAV,
  { label: "Team check-ins", route: "#/team" },
  { label: "Dashboard", route: "#/dashboard" },
  { label: "Red flags", route: "#/flags" },
];

const ADMIN_NAV: NavItem[] = [
  ...MANAGER_NAV,
  { label: "Groups", route: "#/admin/groups" },
  { label: "Templates", route: "#/admin/templates" },
  { label: "Schedules", route: "#/admin/schedules" },
];

export function navFor(role: Profile["role"]): NavItem[] {
  switch (role) {
    case "employee":
      return EMPLOYEE_NAV;
    case "manager":
      return MANAGER_NAV;
    case "admin":
      return ADMIN_NAV;
  }
}

export function renderNav(profile: Profile, active: string, onLogout: () => void): HTMLElement {
  const nav = el("nav", { "aria-label": "Primary" });
  const list = el("ul", {});
  for (const item of navFor(profile.role)) {
    const link = el("a", { href: item.route }, item.label);
    if (item.route === active) link.setAttribute("aria-current", "page");
    list.append(el("li", {}, link));
  }
  nav.append(list);
  const logout = el("button", { type: "button", class: "nav-logout" }, "Log out");
  logout.addEventListener("click", onLogout);
  nav.append(
    el("span", { class: "nav-user" }, `${profile.display_name} (${profile.role})`),
    logout,
  );
  return nav;
}
