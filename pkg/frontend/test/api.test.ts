import { describe, expect, it } from "vitest";

import { ApiError, createApi } from "../src/api.js";
import { fixtures, makeFixtureFetch } from "./fixtureServer.js";

describe("api client", () => {
  it("parses every recorded payload against its schema", async () => {
    const { fetchImpl } = makeFixtureFetch();
    const api = createApi({ fetchImpl });
    expect(await api.getThemes()).toEqual(fixtures.themes);
    expect(await api.getClusters()).toEqual(fixtures.clusters);
    expect(await api.getElbow()).toEqual(fixtures.elbow);
    expect(await api.getCombos()).toEqual(fixtures.combos);
    expect(await api.getReadiness()).toEqual(fixtures.readiness);
    expect(await api.getAssessment(fixtures.assessment.assessment_id)).toEqual(
      fixtures.assessment
    );
    expect(
      await api.postTargeting(fixtures.targeting.theme_id, fixtures.targeting.quota)
    ).toEqual(fixtures.targeting);
  });

  it("raises ApiError with status and detail on 404", async () => {
    const { fetchImpl } = makeFixtureFetch();
    const api = createApi({ fetchImpl });
    await expect(api.getAssessment("ghost")).rejects.toMatchObject({ status: 404 });
    await expect(api.getAssessment("ghost")).rejects.toBeInstanceOf(ApiError);
  });

  it("attaches the bearer token to every request", async () => {
    const { fetchImpl, requests } = makeFixtureFetch();
    const api = createApi({ fetchImpl, token: "sekrit" });
    await api.getThemes();
    expect(requests[0]?.headers["Authorization"]).toBe("Bearer sekrit");
  });
});
