/** Hash-routed single-page client for the statement service. */

import { ApiClient } from "./api.js";
import { el, swap } from "./dom.js";
import { renderTypeEditor } from "./editor.js";
import { renderEntryForm } from "./entry.js";
import { renderSearch } from "./search.js";
import { renderStatementPage } from "./statement.js";

const SERVER_KEY = "rosetta.server";

function defaultServer(): string {
  const stored = window.localStorage.getItem(SERVER_KEY);
  if (stored) return stored;
  // When the page is served next to the API, same-origin requests just work;
  // opened from disk, fall back to the default local service address.
  return window.location.protocol.startsWith("http") ? "" : "http://127.0.0.1:8000";
}

function renderTypeList(root: HTMLElement, api: ApiClient): void {
  api.listTypes().then(({ types }) => {
    swap(
      root,
      el(
        "div",
        { class: "panel" },
        el("h2", {}, "Statement types"),
        el("ul", {}, ...types.map((t) =>
          el(
            "li",
            {},
            el("strong", {}, t.label),
            ` — ${t.formalized} `,
            el("a", { href: `#/new/${encodeURIComponent(t.id)}` }, "add statement"),
          ),
        )),
        el("p", {}, el("a", { href: "#/types/new" }, "New statement type")),
      ),
    );
  }, (err) => swap(root, el("p", { class: "error" }, String(err))));
}

function route(root: HTMLElement, api: ApiClient): void {
  const hash = window.location.hash.replace(/^#/, "") || "/";
  const [, head, ...rest] = hash.split("/");
  if (head === "types" && rest[0] === "new") {
    renderTypeEditor(root, api);
  } else if (head === "types") {
    renderTypeList(root, api);
  } else if (head === "new" && rest.length > 0) {
    renderEntryForm(root, api, decodeURIComponent(rest.join("/")));
  } else if (head === "statements" && rest.length > 0) {
    renderStatementPage(root, api, decodeURIComponent(rest.join("/")));
  } else {
    renderSearch(root, api);
  }
}

export function start(): void {
  const app = document.getElementById("app");
  if (!app) return;
  let api = new ApiClient(defaultServer());

  const serverInput = el("input", {
    type: "text",
    value: api.baseUrl,
    placeholder: "service URL (blank = same origin)",
    title: "Statement service base URL",
  });
  serverInput.addEventListener("change", () => {
    window.localStorage.setItem(SERVER_KEY, serverInput.value.trim());
    api = new ApiClient(serverInput.value.trim());
    route(app, api);
  });

  const nav = el(
    "nav",
    {},
    el("strong", {}, "rosetta"),
    el("a", { href: "#/" }, "Search"),
    el("a", { href: "#/types" }, "Types"),
    el("a", { href: "#/types/new" }, "New type"),
    serverInput,
  );
  document.body.insertBefore(nav, app);

  window.addEventListener("hashchange", () => route(app, api));
  route(app, api);
}

start();
