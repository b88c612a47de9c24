/** Admin builders: group editor, template builder with reorderable
 * questions, schedule configurator. All writes go through the admin API;
 * CONFLICT responses are explained next to the submit control. */

import type { ApiClient, GroupSummary, Question, Schedule, Template } from "./api";
import { ApiError } from "./api";
import { button, clear, el, labeled, select, statusLine, textInput } from "./dom";

function errorText(err: unknown): string {
  if (err instanceof ApiError && err.envelope.code === "CONFLICT") {
    return `Conflict: ${err.envelope.message}. Pick a different week or group.`;
  }
  return err instanceof Error ? err.message : String(err);
}

// --- group editor ----------------------------------------------------------------

export function createGroupEditor(api: ApiClient): HTMLElement {
  const root = el("section", { "aria-label": "Group editor" });
  const listWrap = el("div", { class: "group-list" });
  const problem = el("div", { class: "problem-slot" });

  const nameInput = textInput({ placeholder: "Platform" });
  const membersInput = textInput({ placeholder: "comma-separated user ids" });
  const managersInput = textInput({ placeholder: "comma-separated user ids" });
  const form = el(
    "form",
    { class: "builder-form" },
    el("h3", {}, "New group"),
    labeled("Group name", nameInput),
    labeled("Members", membersInput),
    labeled("Managers", managersInput),
    problem,
    button(
      "Create group",
      () => {
        void create();
      },
      { class: "cta" },
    ),
  );
  form.addEventListener("submit", (ev) => ev.preventDefault());

  function ids(raw: string): string[] {
    return raw
      .split(",")
      .map((s) => s.trim())
      .filter((s) => s !== "");
  }

  async function create(): Promise<void> {
    clear(problem);
    try {
      await api.createGroup({
        name: nameInput.value,
        member_ids: ids(membersInput.value),
        manager_ids: ids(managersInput.value),
      });
      nameInput.value = "";
      await refresh();
    } catch (err) {
      problem.append(statusLine("error", errorText(err)));
    }
  }

  function row(group: GroupSummary): HTMLElement {
    const label = `${group.name}${group.archived ? " (archived)" : ""}`;
    const item = el("li", {}, el("span", {}, label), el("span", { class: "muted" }, ` ${group.members.length} members, ${group.managers.length} managers `));
    item.append(
      button(group.archived ? `Unarchive ${group.name}` : `Archive ${group.name}`, () => {
        void api.editGroup(group.id, { archived: !group.archived }).then(refresh);
      }),
    );
    return item;
  }

  async function refresh(): Promise<void> {
    const page = await api.listGroups();
    clear(listWrap);
    const list = el("ul", {});
    for (const g of page.items) list.append(row(g));
    listWrap.append(el("h3", {}, "Groups"), list);
  }

  root.append(el("h2", {}, "Groups"), form, listWrap);
  void refresh().catch((err: unknown) => problem.append(statusLine("error", errorText(err))));
  return root;
}

// --- template builder -------------------------------------------------------------

export interface QuestionDraft {
  prompt: string;
  kind: "likert5" | "free_text";
  required: boolean;
}

export function moveQuestion(drafts: QuestionDraft[], index: number, delta: -1 | 1): QuestionDraft[] {
  const target = index + delta;
  if (target < 0 || target >= drafts.length) return drafts;
  const moved = drafts[index];
  const displaced = drafts[target];
  if (moved === undefined || displaced === undefined) return drafts;
  const next = drafts.slice();
  next[index] = displaced;
  next[target] = moved;
  return next;
}

export function createTemplateBuilder(api: ApiClient): HTMLElement {
  const root = el("section", { "aria-label": "Template builder" });
  let drafts: QuestionDraft[] = [];
  const problem = el("div", { class: "problem-slot" });
  const draftsWrap = el("div", { class: "drafts" });
  const titleInput = textInput({ placeholder: "Weekly Pulse" });
  const promptInput = textInput({ placeholder: "How was your week?" });
  const kindSelect = select([
    { value: "likert5", label: "Likert 1-5" },
    { value: "free_text", label: "Free text" },
  ]);
  const requiredSelect = select([
    { value: "yes", label: "Required" },
    { value: "no", label: "Optional" },
  ]);

  const templatesWrap = el("div", { class: "template-list" });
  const assignProblem = el("div", { class: "problem-slot" });

  function renderDrafts(): void {
    clear(draftsWrap);
    if (drafts.length === 0) {
      draftsWrap.append(el("p", { class: "empty" }, "No questions yet."));
      return;
    }
    const list = el("ol", {});
    drafts.forEach((d, i) => {
      const item = el(
        "li",
        {},
        el("span", {}, `${d.prompt} [${d.kind}${d.required ? "" : ", optional"}] `),
      );
      item.append(
        button(`Move up: ${d.prompt}`, () => {
          drafts = moveQuestion(drafts, i, -1);
          renderDrafts();
        }),
        button(`Move down: ${d.prompt}`, () => {
          drafts = moveQuestion(drafts, i, 1);
          renderDrafts();
        }),
        button(`Remove: ${d.prompt}`, () => {
          drafts = drafts.filter((_, j) => j !== i);
          renderDrafts();
        }),
      );
      list.append(item);
    });
    draftsWrap.append(list);
  }

  const form = el(
    "form",
    { class: "builder-form" },
    el("h3", {}, "New template"),
    labeled("Template title", titleInput),
    labeled("Question prompt", promptInput),
    labeled("Question kind", kindSelect),
    labeled("Answer policy", requiredSelect),
    button("Add question", () => {
      if (promptInput.value.trim() === "") return;
      drafts = [
        ...drafts,
        {
          prompt: promptInput.value,
          kind: kindSelect.value as QuestionDraft["kind"],
          required: requiredSelect.value === "yes",
        },
      ];
      promptInput.value = "";
      renderDrafts();
    }),
    problem,
    button(
      "Create template",
      () => {
        void create();
      },
      { class: "cta" },
    ),
  );
  form.addEventListener("submit", (ev) => ev.preventDefault());

  async function create(): Promise<void> {
    clear(problem);
    try {
      await api.createTemplate({ title: titleInput.value, questions: drafts });
      drafts = [];
      titleInput.value = "";
      renderDrafts();
      await refresh();
    } catch (err) {
      problem.append(statusLine("error", errorText(err)));
    }
  }

  function questionSummary(questions: Question[]): string {
    return `${questions.length} question${questions.length === 1 ? "" : "s"}`;
  }

  async function refresh(): Promise<void> {
    const [templates, groups] = await Promise.all([api.listTemplates(), api.listGroups()]);
    clear(templatesWrap);
    templatesWrap.append(el("h3", {}, "Templates"));
    const list = el("ul", {});
    for (const t of templates.items) {
      const item = el(
        "li",
        {},
        el("span", {}, `${t.title} [${t.status}] ${questionSummary(t.questions)} `),
      );
      item.append(assignControls(t, groups.items));
      list.append(item);
    }
    templatesWrap.append(list, assignProblem);
  }

  function assignControls(template: Template, groups: GroupSummary[]): HTMLElement {
    const groupSelect = select(
      groups.filter((g) => !g.archived).map((g) => ({ value: g.id, label: g.name })),
      { "aria-label": `Group for ${template.title}` },
    );
    const weekInput = textInput({
      placeholder: "2026-W33",
      "aria-label": `First active week for ${template.title}`,
    });
    const wrap = el("span", { class: "assign" }, groupSelect, weekInput);
    wrap.append(
      button(`Assign ${template.title}`, () => {
        clear(assignProblem);
        void api
          .assignTemplate(template.id, groupSelect.value, weekInput.value.trim())
          .then(refresh)
          .catch((err: unknown) => assignProblem.append(statusLine("error", errorText(err))));
      }),
    );
    return wrap;
  }

  root.append(el("h2", {}, "Templates"), form, draftsWrap, templatesWrap);
  renderDrafts();
  void refresh().catch((err: unknown) => problem.append(statusLine("error", errorText(err))));
  return root;
}

// --- schedule configurator ----------------------------------------------------------

const WEEKDAYS = ["mon", "tue", "wed", "thu", "fri", "sat", "sun"];

export function createScheduleBuilder(api: ApiClient): HTMLElement {
  const root = el("section", { "aria-label": "Schedule configurator" });
  const problem = el("div", { class: "problem-slot" });
  const listWrap = el("div", { class: "schedule-list" });

  const groupSelect = select([], { "aria-label": "Group" });
  const templateSelect = select([], { "aria-label": "Template" });
  const weekdaySelect = select(
    WEEKDAYS.map((d) => ({ value: d, label: d })),
    { "aria-label": "Weekday" },
  );
  const timeInput = textInput({ value: "09:00", placeholder: "09:00" });
  const tzInput = textInput({ value: "UTC", placeholder: "Europe/Berlin" });

  const form = el(
    "form",
    { class: "builder-form" },
    el("h3", {}, "New schedule"),
    labeled("Group", groupSelect),
    labeled("Template", templateSelect),
    labeled("Weekday", weekdaySelect),
    labeled("Local time (HH:MM)", timeInput),
    labeled("Timezone", tzInput),
    problem,
    button(
      "Create schedule",
      () => {
        clear(problem);
        void api
          .createSchedule({
            group_id: groupSelect.value,
            template_id: templateSelect.value,
            weekday: weekdaySelect.value,
            time_of_day: timeInput.value.trim(),
            timezone: tzInput.value.trim(),
          })
          .then(refresh)
          .catch((err: unknown) => problem.append(statusLine("error", errorText(err))));
      },
      { class: "cta" },
    ),
  );
  form.addEventListener("submit", (ev) => ev.preventDefault());

  function scheduleRow(s: Schedule): HTMLElement {
    const item = el(
      "li",
      {},
      el("span", {}, `${s.weekday} ${s.time_of_day} ${s.timezone} ${s.enabled ? "(on)" : "(off)"} `),
    );
    item.append(
      button(s.enabled ? `Disable ${s.weekday} ${s.time_of_day}` : `Enable ${s.weekday} ${s.time_of_day}`, () => {
        void api.editSchedule(s.id, { enabled: !s.enabled }).then(refresh);
      }),
    );
    return item;
  }

  async function refresh(): Promise<void> {
    const [groups, templates, schedules] = await Promise.all([
      api.listGroups(),
      api.listTemplates(),
      api.listSchedules(),
    ]);
    clear(groupSelect);
    for (const g of groups.items.filter((g) => !g.archived)) {
      groupSelect.append(el("option", { value: g.id }, g.name));
    }
    clear(templateSelect);
    for (const t of templates.items) {
      templateSelect.append(el("option", { value: t.id }, t.title));
    }
    clear(listWrap);
    listWrap.append(el("h3", {}, "Schedules"));
    const list = el("ul", {});
    for (const s of schedules.items) list.append(scheduleRow(s));
    listWrap.append(list);
  }

  root.append(el("h2", {}, "Schedules"), form, listWrap);
  void refresh().catch((err: unknown) => problem.append(statusLine("error", errorText(err))));
  return root;
}
