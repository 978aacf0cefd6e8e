export * from "./types.js";
export * from "./grammar.js";
export * from "./api.js";
export * from "./poller.js";
export * from "./views/stepWizard.js";
export * from "./views/assertionEditor.js";
export * from "./views/factorPanel.js";
export * from "./views/graphView.js";
